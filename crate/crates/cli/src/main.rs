mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use ttw4d::harness::{
    default_grid, emit_report, emit_spectrum, parse_form, run_suite, spectrum_table, ConventionChoice, OutputFormat,
    SuiteConfig, SuiteId, SuiteReport,
};
use ttw4d::model::SystemParams;

const DEFAULT_A: &str = "1/2,1/2,1/2,1/2";
const DEFAULT_K: &str = "1,1,1";
const DEFAULT_OMEGA: &str = "1";

#[derive(Parser)]
#[command(name = "ttw4d", version, about = "Verification suites and spectrum tables for the 4D TTW system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report residuals.
    Verify(Flags),
    /// Print the spectrum with degeneracy classes.
    Spectrum(Flags),
}

#[derive(Args)]
struct Flags {
    /// Flat key=value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// eigen, ladders, xi, algebra, m1, curvature, conformal, example211 or all.
    #[arg(long)]
    suite: Option<String>,
    /// k₁,k₂,k₃ as rationals, e.g. 2,1,1.
    #[arg(long)]
    k: Option<String>,
    /// a₁,a₂,a₃,a₄ as rationals, e.g. 1/2,1/2,1/2,1/2.
    #[arg(long)]
    a: Option<String>,
    /// Rational ω, or `formal`.
    #[arg(long)]
    omega: Option<String>,
    /// Window size: states with every nᵢ ≤ nmax (at most 8).
    #[arg(long)]
    nmax: Option<String>,
    /// Sample points per pointwise check.
    #[arg(long)]
    points: Option<String>,
    /// Seed for sample points and test functions.
    #[arg(long)]
    seed: Option<String>,
    /// Overrides every suite's tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Write the report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// P⁽⁻⁾ convention: printed, antisymmetric or auto.
    #[arg(long)]
    convention: Option<String>,
    /// Identity and closed-form variant: printed or corrected.
    #[arg(long)]
    form: Option<String>,
}

/// A failure that is the caller's fault; exits with status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// Flags merged over the config file.
struct Settings {
    values: BTreeMap<String, String>,
    report: Option<PathBuf>,
}

impl Settings {
    fn resolve(flags: &Flags) -> Result<Self, Usage> {
        let mut values = match &flags.config {
            Some(path) => config::load(path).map_err(Usage)?,
            None => BTreeMap::new(),
        };
        let given = [
            ("suite", &flags.suite),
            ("k", &flags.k),
            ("a", &flags.a),
            ("omega", &flags.omega),
            ("nmax", &flags.nmax),
            ("points", &flags.points),
            ("seed", &flags.seed),
            ("tol", &flags.tol),
            ("format", &flags.format),
            ("convention", &flags.convention),
            ("form", &flags.form),
        ];
        for (key, v) in given {
            if let Some(v) = v {
                values.insert(key.to_string(), v.clone());
            }
        }
        let report = flags.report.clone().or_else(|| values.get("report").map(PathBuf::from));
        Ok(Settings { values, report })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, Usage>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e| Usage(format!("--{key} {v:?}: {e}"))),
        }
    }

    fn format(&self) -> Result<Option<OutputFormat>, Usage> {
        self.get("format").map(|f| f.parse::<OutputFormat>().map_err(Usage)).transpose()
    }

    /// The explicit parameter set, or the default grid when neither k nor a is given.
    fn params(&self, suite: SuiteId) -> Result<Vec<SystemParams>, Usage> {
        let omega = self.get("omega").unwrap_or(DEFAULT_OMEGA);
        if self.get("k").is_none() && self.get("a").is_none() {
            let w = SystemParams::parse(DEFAULT_K, DEFAULT_A, Some(omega))?.omega().clone();
            let grid = default_grid(&w);
            return Ok(match suite {
                SuiteId::M1 | SuiteId::Example211 => grid.into_iter().filter(|p| p.is_k([2, 1, 1])).collect(),
                _ => grid,
            });
        }
        let k = self.get("k").unwrap_or(DEFAULT_K);
        let a = self.get("a").unwrap_or(DEFAULT_A);
        Ok(vec![SystemParams::parse(k, a, Some(omega))?])
    }
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Usage> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(Usage::from),
    }
}

fn summary(report: &SuiteReport) -> String {
    let mut out = String::new();
    for c in report.failures() {
        let state = c.state.map(|s| format!(" {s}")).unwrap_or_default();
        let detail = c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
        out.push_str(&format!(
            "FAIL {} [{}] {}{state}: residual {:.3e} > {:.1e}{detail}\n",
            c.suite, c.params, c.check, c.residual, c.tolerance
        ));
    }
    for r in &report.conventions {
        out.push_str(&format!(
            "convention [{}] {} i={}: {} form={:?} holds={}\n",
            r.params, r.identity, r.index, r.conventions, r.form, r.holds
        ));
    }
    out.push_str(&format!(
        "{} {}: {} cases, {} failed, max residual {:.3e}, {} ms\n",
        if report.pass { "PASS" } else { "FAIL" },
        report.suite,
        report.cases.len(),
        report.failures().count(),
        report.max_residual,
        report.wall_ms
    ));
    out
}

fn verify(flags: &Flags) -> Result<bool, Usage> {
    let s = Settings::resolve(flags)?;
    let suite: SuiteId = s.parsed("suite", SuiteId::All)?;
    let mut cfg = SuiteConfig::new(suite, s.params(suite)?);
    cfg.nmax = s.parsed("nmax", cfg.nmax)?;
    cfg.points = s.parsed("points", cfg.points)?;
    cfg.seed = s.parsed("seed", cfg.seed)?;
    cfg.tol = s.get("tol").map(|t| t.parse::<f64>().map_err(|e| Usage(format!("--tol {t:?}: {e}")))).transpose()?;
    cfg.convention = s.parsed("convention", ConventionChoice::Printed)?;
    if let Some(f) = s.get("form") {
        cfg.form = parse_form(f)?;
    }
    let format = s.format()?;
    let report = run_suite(&cfg)?;
    match (&s.report, format) {
        (Some(path), f) => {
            write_out(Some(path), &emit_report(&report, f.unwrap_or(OutputFormat::Json))?)?;
            print!("{}", summary(&report));
        }
        (None, Some(f)) => write_out(None, &emit_report(&report, f)?)?,
        (None, None) => print!("{}", summary(&report)),
    }
    Ok(report.pass)
}

fn spectrum(flags: &Flags) -> Result<bool, Usage> {
    let s = Settings::resolve(flags)?;
    let nmax: u32 = s.parsed("nmax", 2)?;
    if nmax > ttw4d::harness::NMAX_LIMIT {
        return Err(Usage(format!("nmax {nmax} exceeds the limit {}", ttw4d::harness::NMAX_LIMIT)));
    }
    let k = s.get("k").unwrap_or(DEFAULT_K);
    let a = s.get("a").unwrap_or(DEFAULT_A);
    let params = SystemParams::parse(k, a, Some(s.get("omega").unwrap_or("formal")))?;
    let rows = spectrum_table(&params, nmax);
    write_out(s.report.as_ref(), &emit_spectrum(&rows, s.format()?)?)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(f) => verify(f),
        Command::Spectrum(f) => spectrum(f),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
