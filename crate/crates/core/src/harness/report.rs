use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{HarnessError, SuiteId};
use crate::lattice::{Conventions, IdentityForm};
use crate::model::{degeneracy_classes, spectral_chain, Omega, QuantumState, SystemParams};
use crate::numcore::{OmegaPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown format {s:?} (expected json or csv)")),
        }
    }
}

/// Parameters as exact strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub k: [Rational; 3],
    pub a: [Rational; 4],
    /// `None` for formal ω.
    pub omega: Option<Rational>,
}

impl ParamsEcho {
    pub fn of(p: &SystemParams) -> Self {
        ParamsEcho {
            k: p.ks().clone(),
            a: std::array::from_fn(|i| p.a(i + 1).clone()),
            omega: match p.omega() {
                Omega::Formal => None,
                Omega::Fixed(w) => Some(w.clone()),
            },
        }
    }
}

/// One checked relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub suite: SuiteId,
    pub params: String,
    pub check: String,
    pub state: Option<QuantumState>,
    /// (r, θ₁, θ₂, θ₃) of the worst point, for pointwise checks.
    pub point: Option<[f64; 4]>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub conventions: Option<String>,
    pub detail: Option<String>,
}

impl CaseRecord {
    pub fn new(suite: SuiteId, params: &SystemParams, check: impl Into<String>) -> Self {
        CaseRecord {
            suite,
            params: params_label(params),
            check: check.into(),
            state: None,
            point: None,
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
            conventions: None,
            detail: None,
        }
    }

    pub fn state(mut self, s: QuantumState) -> Self {
        self.state = Some(s);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn conventions(mut self, c: impl Into<String>) -> Self {
        self.conventions = Some(c.into());
        self
    }

    /// Passes when residual ≤ tolerance. A non-finite residual fails and is
    /// stored as `f64::MAX` so that reports stay valid JSON.
    pub fn numeric(mut self, residual: f64, tolerance: f64, point: Option<[f64; 4]>) -> Self {
        self.tolerance = tolerance;
        self.point = point;
        self.pass = residual.is_finite() && residual <= tolerance;
        if residual.is_finite() {
            self.residual = residual;
        } else {
            self.residual = f64::MAX;
            self.detail.get_or_insert_with(|| format!("non-finite residual {residual}"));
        }
        self
    }

    /// Passes only for an exactly zero residual; `residual` is its largest coefficient.
    pub fn exact(mut self, holds: bool, residual: f64) -> Self {
        self.residual = residual;
        self.tolerance = 0.0;
        self.pass = holds;
        self
    }

    pub fn failed(mut self, why: impl Into<String>) -> Self {
        self.pass = false;
        self.detail = Some(why.into());
        self
    }
}

pub(crate) fn params_label(p: &SystemParams) -> String {
    let j = |xs: &[Rational]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    let a: Vec<Rational> = (1..=4).map(|i| p.a(i).clone()).collect();
    format!("k=({}) a=({})", j(p.ks()), j(&a))
}

/// The convention an exact identity was evaluated under, and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionRecord {
    pub params: String,
    pub index: usize,
    pub identity: String,
    pub conventions: Conventions,
    pub form: IdentityForm,
    pub holds: bool,
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub params: Vec<ParamsEcho>,
    pub conventions: Vec<ConventionRecord>,
    pub cases: Vec<CaseRecord>,
    pub max_residual: f64,
    pub pass: bool,
    pub wall_ms: u64,
}

impl SuiteReport {
    pub fn assemble(
        suite: SuiteId,
        params: Vec<ParamsEcho>,
        conventions: Vec<ConventionRecord>,
        cases: Vec<CaseRecord>,
        wall_ms: u64,
    ) -> Self {
        let max_residual = cases.iter().map(|c| c.residual).filter(|r| r.is_finite()).fold(0.0, f64::max);
        let pass = cases.iter().all(|c| c.pass);
        SuiteReport { suite, params, conventions, cases, max_residual, pass, wall_ms }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    params: &'a str,
    check: &'a str,
    state: String,
    point: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
    conventions: &'a str,
    detail: &'a str,
}

/// Serializes a report. JSON carries the whole report; CSV has one row per case.
pub fn emit_report(report: &SuiteReport, format: OutputFormat) -> Result<Vec<u8>, HarnessError> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if report.cases.is_empty() {
                w.write_record([
                    "suite",
                    "params",
                    "check",
                    "state",
                    "point",
                    "residual",
                    "tolerance",
                    "pass",
                    "conventions",
                    "detail",
                ])?;
            }
            for c in &report.cases {
                w.serialize(CsvRow {
                    suite: c.suite.name(),
                    params: &c.params,
                    check: &c.check,
                    state: c.state.map(|s| s.to_string()).unwrap_or_default(),
                    point: c.point.map(|p| format!("{};{};{};{}", p[0], p[1], p[2], p[3])).unwrap_or_default(),
                    residual: c.residual,
                    tolerance: c.tolerance,
                    pass: c.pass,
                    conventions: c.conventions.as_deref().unwrap_or(""),
                    detail: c.detail.as_deref().unwrap_or(""),
                })?;
            }
            w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))
        }
    }
}

/// Reads a JSON report back.
pub fn parse_report(bytes: &[u8]) -> Result<SuiteReport, HarnessError> {
    Ok(serde_json::from_slice(bytes)?)
}

/// One row of the spectrum table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub state: QuantumState,
    pub a0: Rational,
    pub ell: [Rational; 3],
    pub energy: OmegaPoly,
    pub energy_display: String,
    /// Index of the degeneracy class, 0 for the highest energy.
    pub class: usize,
    pub class_size: usize,
}

/// States with nᵢ ≤ nmax, ground state first (E decreasing at ω = 1), each
/// tagged with its exact degeneracy class.
pub fn spectrum_table(params: &SystemParams, nmax: u32) -> Vec<SpectrumRow> {
    let classes = degeneracy_classes(params, nmax);
    let mut rows = Vec::new();
    for (c, (energy, members)) in classes.iter().enumerate() {
        for s in members {
            let d = spectral_chain(params, s);
            rows.push(SpectrumRow {
                state: *s,
                a0: d.a0.clone(),
                ell: [d.ell1.clone(), d.ell2.clone(), d.ell3.clone()],
                energy: energy.clone(),
                energy_display: energy.to_string(),
                class: c,
                class_size: members.len(),
            });
        }
    }
    rows
}

/// Renders a spectrum table as aligned text, JSON or CSV.
pub fn emit_spectrum(rows: &[SpectrumRow], format: Option<OutputFormat>) -> Result<Vec<u8>, HarnessError> {
    match format {
        Some(OutputFormat::Json) => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
        Some(OutputFormat::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["state", "A0", "l1", "l2", "l3", "E", "class", "class_size"])?;
            for r in rows {
                w.write_record([
                    r.state.to_string(),
                    r.a0.to_string(),
                    r.ell[0].to_string(),
                    r.ell[1].to_string(),
                    r.ell[2].to_string(),
                    r.energy_display.clone(),
                    r.class.to_string(),
                    r.class_size.to_string(),
                ])?;
            }
            w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))
        }
        None => {
            let header = ["state", "A0", "l1", "l2", "l3", "E", "class"];
            let table: Vec<[String; 7]> = rows
                .iter()
                .map(|r| {
                    let tag = if r.class_size > 1 { format!("{} (x{})", r.class, r.class_size) } else { r.class.to_string() };
                    [
                        r.state.to_string(),
                        r.a0.to_string(),
                        r.ell[0].to_string(),
                        r.ell[1].to_string(),
                        r.ell[2].to_string(),
                        r.energy_display.clone(),
                        tag,
                    ]
                })
                .collect();
            let mut width: BTreeMap<usize, usize> = header.iter().enumerate().map(|(i, h)| (i, h.chars().count())).collect();
            for row in &table {
                for (i, cell) in row.iter().enumerate() {
                    let w = width.entry(i).or_default();
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut out = String::new();
            let line = |cells: &[String], out: &mut String| {
                let parts: Vec<String> =
                    cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[&i])).collect();
                let _ = writeln!(out, "{}", parts.join("  ").trim_end());
            };
            line(&header.map(String::from), &mut out);
            for row in &table {
                line(row, &mut out);
            }
            Ok(out.into_bytes())
        }
    }
}
