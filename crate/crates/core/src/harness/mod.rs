//! Batch verification: suites of checks over parameter sets, spectrum tables
//! and machine-readable reports.

mod report;
mod suites;

pub use report::{
    emit_report, emit_spectrum, parse_report, spectrum_table, CaseRecord, ConventionRecord, OutputFormat, ParamsEcho,
    SpectrumRow, SuiteReport,
};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::IdentityForm;
use crate::model::{ModelError, Omega, SystemParams};

/// Largest window the suites accept.
pub const NMAX_LIMIT: u32 = 8;

/// Pointwise suites evaluate eigenfunctions on nᵢ ≤ min(nmax, this).
pub const POINTWISE_NMAX: u32 = 3;

/// At most this many states per exact identity check, evenly spaced.
pub const EXACT_STATE_CAP: usize = 24;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("unknown convention {0:?} (expected printed, antisymmetric or auto)")]
    UnknownConvention(String),
    #[error("unknown form {0:?} (expected printed or corrected)")]
    UnknownForm(String),
    #[error("nmax {0} exceeds the limit {NMAX_LIMIT}")]
    NmaxTooLarge(u32),
    #[error("suite {0} requires k=(2,1,1)")]
    RequiresK211(SuiteId),
    #[error("suite {0} needs a numeric omega")]
    FormalOmega(SuiteId),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Eigen,
    Ladders,
    Xi,
    Algebra,
    M1,
    Curvature,
    Conformal,
    Example211,
    All,
}

impl SuiteId {
    pub const EACH: [SuiteId; 8] = [
        SuiteId::Eigen,
        SuiteId::Ladders,
        SuiteId::Xi,
        SuiteId::Algebra,
        SuiteId::M1,
        SuiteId::Curvature,
        SuiteId::Conformal,
        SuiteId::Example211,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Eigen => "eigen",
            SuiteId::Ladders => "ladders",
            SuiteId::Xi => "xi",
            SuiteId::Algebra => "algebra",
            SuiteId::M1 => "m1",
            SuiteId::Curvature => "curvature",
            SuiteId::Conformal => "conformal",
            SuiteId::Example211 => "example211",
            SuiteId::All => "all",
        }
    }

    /// Default tolerance of the numeric comparisons; exact suites demand zero.
    pub fn default_tolerance(self) -> f64 {
        match self {
            SuiteId::Eigen | SuiteId::Xi | SuiteId::Example211 => 1e-7,
            SuiteId::Ladders | SuiteId::Conformal => 1e-8,
            SuiteId::Curvature => 1e-9,
            SuiteId::Algebra | SuiteId::M1 | SuiteId::All => 0.0,
        }
    }

    fn needs_k211(self) -> bool {
        matches!(self, SuiteId::M1 | SuiteId::Example211)
    }

    fn needs_numeric_omega(self) -> bool {
        matches!(self, SuiteId::Eigen | SuiteId::Ladders | SuiteId::Xi | SuiteId::Conformal | SuiteId::Example211)
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::EACH
            .into_iter()
            .chain([SuiteId::All])
            .find(|id| id.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

/// The P⁽⁻⁾ convention requested for the exact suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionChoice {
    Printed,
    Antisymmetric,
    /// Search every P⁽⁻⁾ and triple convention and record the first that holds.
    Auto,
}

impl FromStr for ConventionChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "printed" => Ok(ConventionChoice::Printed),
            "antisymmetric" => Ok(ConventionChoice::Antisymmetric),
            "auto" => Ok(ConventionChoice::Auto),
            _ => Err(HarnessError::UnknownConvention(s.to_string())),
        }
    }
}

/// Parses `printed` or `corrected`.
pub fn parse_form(s: &str) -> Result<IdentityForm, HarnessError> {
    match s {
        "printed" => Ok(IdentityForm::Printed),
        "corrected" => Ok(IdentityForm::Corrected),
        _ => Err(HarnessError::UnknownForm(s.to_string())),
    }
}

/// What to run and on which parameter sets.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: SuiteId,
    pub params: Vec<SystemParams>,
    pub nmax: u32,
    pub points: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub convention: ConventionChoice,
    pub form: IdentityForm,
}

impl SuiteConfig {
    pub fn new(suite: SuiteId, params: Vec<SystemParams>) -> Self {
        SuiteConfig {
            suite,
            params,
            nmax: 6,
            points: 20,
            seed: 1,
            tol: None,
            convention: ConventionChoice::Printed,
            form: IdentityForm::Printed,
        }
    }

    pub fn tolerance(&self, suite: SuiteId) -> f64 {
        self.tol.unwrap_or_else(|| suite.default_tolerance())
    }

    /// Checks the window guard and the suite/parameter combination.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.nmax > NMAX_LIMIT {
            return Err(HarnessError::NmaxTooLarge(self.nmax));
        }
        for p in &self.params {
            if self.suite.needs_k211() && !p.is_k([2, 1, 1]) {
                return Err(HarnessError::RequiresK211(self.suite));
            }
            let numeric = match self.suite {
                SuiteId::All => SuiteId::EACH.iter().any(|s| s.needs_numeric_omega()),
                s => s.needs_numeric_omega(),
            };
            if numeric && matches!(p.omega(), Omega::Formal) {
                return Err(HarnessError::FormalOmega(self.suite));
            }
        }
        Ok(())
    }
}

/// k ∈ {(1,1,1), (2,1,1), (3/2,3/2,1), (2,1,2)} × a ∈ {(½,½,½,½), (1/3,2/5,3/7,1/2)}.
pub fn default_grid(omega: &Omega) -> Vec<SystemParams> {
    let ks = ["1,1,1", "2,1,1", "3/2,3/2,1", "2,1,2"];
    let aas = ["1/2,1/2,1/2,1/2", "1/3,2/5,3/7,1/2"];
    let mut out = Vec::new();
    for k in ks {
        for a in aas {
            let k3 = crate::model::parse_list::<3>(k).expect("grid literal");
            let a4 = crate::model::parse_list::<4>(a).expect("grid literal");
            out.push(SystemParams::new(k3, a4, omega.clone()).expect("grid parameters are valid"));
        }
    }
    out
}

/// The suites `all` runs on one parameter set.
fn suites_for(params: &SystemParams) -> Vec<SuiteId> {
    SuiteId::EACH.into_iter().filter(|s| !s.needs_k211() || params.is_k([2, 1, 1])).collect()
}

/// Runs the configured suite on every parameter set and assembles the report.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let jobs: Vec<(SuiteId, &SystemParams)> = config
        .params
        .iter()
        .flat_map(|p| {
            let ids = if config.suite == SuiteId::All { suites_for(p) } else { vec![config.suite] };
            ids.into_iter().map(move |s| (s, p))
        })
        .collect();
    let parts: Vec<(Vec<CaseRecord>, Vec<ConventionRecord>)> =
        jobs.par_iter().map(|(s, p)| suites::run_one(*s, p, config)).collect();
    let mut cases = Vec::new();
    let mut conventions = Vec::new();
    for (c, r) in parts {
        cases.extend(c);
        conventions.extend(r);
    }
    Ok(SuiteReport::assemble(
        config.suite,
        config.params.iter().map(ParamsEcho::of).collect(),
        conventions,
        cases,
        start.elapsed().as_millis() as u64,
    ))
}

/// Evenly spaced subset of at most `cap` items, keeping the first and last.
pub(crate) fn spread<T: Clone>(items: &[T], cap: usize) -> Vec<T> {
    if items.len() <= cap {
        return items.to_vec();
    }
    if cap < 2 {
        return items.iter().take(cap).cloned().collect();
    }
    let n = items.len() - 1;
    (0..cap).map(|j| items[j * n / (cap - 1)].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Rational;

    #[test]
    fn spread_keeps_ends() {
        let v: Vec<u32> = (0..100).collect();
        let s = spread(&v, 5);
        assert_eq!(s, vec![0, 24, 49, 74, 99]);
        assert_eq!(spread(&v[..3], 5), vec![0, 1, 2]);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in SuiteId::EACH {
            assert_eq!(s.name().parse::<SuiteId>().unwrap(), s);
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn example_suite_guard() {
        let p = SystemParams::parse("3,1,1", "1,1,1,1", Some("1")).unwrap();
        let cfg = SuiteConfig::new(SuiteId::Example211, vec![p]);
        assert!(matches!(run_suite(&cfg), Err(HarnessError::RequiresK211(SuiteId::Example211))));
    }

    #[test]
    fn default_grid_size() {
        assert_eq!(default_grid(&Omega::Fixed(Rational::one())).len(), 8);
    }
}
