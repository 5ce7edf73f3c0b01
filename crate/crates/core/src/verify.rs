//! Verification suites producing line-oriented `PASS key=value` reports.

use crate::cohomology::{h1_dimension, CohomologyError, Mode};
use crate::linalg::{format_rational, int, Matrix, Rational};
use crate::quiver_rep::{hilbert_formula, hilbert_series, koszul_numerical_check, path_algebra_layer};
use crate::weight_engine::{
    casimir_projection_check, check_cuspidal, de_rham_report, highest_weight_casimir, predicted_cuspidal_failures,
    z_grading, ExponentVector, LogAction, WeightError, WindowModule,
};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub pass: bool,
    pub key: String,
    pub value: String,
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}={}", if self.pass { "PASS" } else { "FAIL" }, self.key, self.value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn push(&mut self, pass: bool, key: impl Into<String>, value: impl fmt::Display) {
        self.records.push(Record { pass, key: key.into(), value: value.to_string().replace(' ', "") });
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn get(&self, key: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.key == key)
    }

    /// One record per line, newline-terminated.
    pub fn render(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cuspidal,
    DeRham,
    Ext,
    Hilbert,
    Casimir,
    Koszul,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Cuspidal, Suite::DeRham, Suite::Ext, Suite::Hilbert, Suite::Casimir, Suite::Koszul];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cuspidal => "cuspidal",
            Suite::DeRham => "derham",
            Suite::Ext => "ext",
            Suite::Hilbert => "hilbert",
            Suite::Casimir => "casimir",
            Suite::Koszul => "koszul",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::Usage(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub radius: usize,
    /// Defaults to [`ExponentVector::default_for`].
    pub mu: Option<ExponentVector>,
    pub log_degree: usize,
    pub cutoff: usize,
}

impl SuiteConfig {
    pub fn new(n: usize) -> Self {
        SuiteConfig { n, radius: 4, mu: None, log_degree: 1, cutoff: 10 }
    }

    fn mu(&self) -> Result<ExponentVector, VerifyError> {
        match &self.mu {
            Some(m) if m.n() != self.n => {
                Err(VerifyError::Usage(format!("--mu has {} components, --n {} needs {}", m.n() + 1, self.n, self.n + 1)))
            }
            Some(m) => Ok(m.clone()),
            None => Ok(ExponentVector::default_for(self.n)),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    if cfg.n == 0 {
        return Err(VerifyError::Usage("--n must be at least 1".into()));
    }
    match suite {
        Suite::Cuspidal => cuspidal(cfg),
        Suite::DeRham => derham(cfg),
        Suite::Ext => ext(cfg),
        Suite::Hilbert => Ok(hilbert(cfg)),
        Suite::Casimir => casimir(cfg),
        Suite::Koszul => Ok(koszul(cfg)),
    }
}

fn cuspidal(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    let mu = cfg.mu()?;
    let w = WindowModule::functions(&mu, cfg.radius);
    let r = check_cuspidal(&w);
    let mut out = Report::default();
    let integral = mu.integral_components();
    let listed: Vec<String> = integral.iter().map(|i| i.to_string()).collect();
    out.push(integral.is_empty(), "integral_components", if listed.is_empty() { "none".into() } else { listed.join(",") });
    if r.passed() {
        out.push(true, "cuspidal_blocks", r.blocks_checked);
    } else {
        out.push(false, "cuspidal_failures", r.failures.len());
        let f = &r.failures[0];
        out.push(false, "first_failure", format!("E{}{}@{:?}", f.i, f.j, f.weight));
    }
    out.push(r.failures == predicted_cuspidal_failures(&w), "failures_match_prediction", r.failures.len());
    Ok(out)
}

fn derham(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    let mu = cfg.mu()?;
    let r = de_rham_report(&mu, cfg.radius)?;
    let mut out = Report::default();
    out.push(true, "weights_checked", r.weights_checked);
    let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
    out.push(true, "omega_dims", dims.join(","));
    out.push(r.d_squared_zero, "d_squared_zero", r.d_squared_zero);
    out.push(r.cartan_formula, "cartan_formula", r.cartan_formula);
    out.push(r.image_in_kernel, "image_in_kernel", r.image_in_kernel);
    match &r.first_inexact {
        None => out.push(true, "exact", true),
        Some((d, k)) => out.push(false, "exact", format!("k{k}@{d:?}")),
    }
    Ok(out)
}

fn ext(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    let mu = cfg.mu()?;
    let lo = cfg.radius.min(3);
    let w = WindowModule::functions(&mu, cfg.radius);
    let mut out = Report::default();
    out.push(true, "radii", format!("{lo}..{}", cfg.radius));
    let certified = cfg.n == 1;
    for (mode, key, expected) in
        [(Mode::Relative, "dim_H1_relative", 1), (Mode::Generalized, "dim_H1_generalized", cfg.n + 1)]
    {
        let rep = h1_dimension(&w, mode, lo..=cfg.radius)?;
        let last = rep.per_radius.last().map(|d| d.dim_h1).unwrap_or(0);
        if certified {
            out.push(rep.stable && last == expected, key, last);
        } else {
            out.push(rep.stable, format!("{key}_uncertified"), last);
        }
        out.push(rep.stable, format!("{key}_stable"), rep.stable);
    }
    Ok(out)
}

fn series(s: &[i64]) -> String {
    s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn hilbert(cfg: &SuiteConfig) -> Report {
    let (n, cutoff) = (cfg.n, cfg.cutoff);
    let mut out = Report::default();
    let counted = hilbert_series(n, cutoff);
    let formula = hilbert_formula(n, cutoff);
    for i in 0..n {
        for j in 0..n {
            out.push(counted[i][j] == formula[i][j], format!("b_{}{}", i + 1, j + 1), series(&counted[i][j]));
        }
    }
    let dims: Vec<usize> = (0..=cutoff).map(|m| path_algebra_layer(n, m).dim()).collect();
    let expected: Vec<usize> = (0..=cutoff).map(|m| if m == 0 { n } else { 2 * n }).collect();
    let text: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    out.push(dims == expected, "layer_dims", text.join(","));
    out
}

fn koszul(cfg: &SuiteConfig) -> Report {
    let mut out = Report::default();
    out.push(koszul_numerical_check(cfg.n, cfg.cutoff), "koszul_identity_through_degree", cfg.cutoff);
    out
}

fn casimir(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    let mu = cfg.mu()?;
    let n = cfg.n;
    let mut out = Report::default();
    let base = WindowModule::functions(&mu, cfg.radius);
    let mut top = vec![Rational::from_integer(0.into()); n + 1];
    top[0] = mu.total();
    let expected = highest_weight_casimir(&top);
    let scalar = base.interior_weights(2).iter().all(|d| base.casimir(d) == Matrix::scalar(1, &expected));
    out.push(scalar, "casimir_scalar", format_rational(&expected));

    if n == 1 {
        // Ω(u f) = u Ω(f) + 2(1 + |μ|) f on F_μ^(1)
        let ext = base.log_extend_with(cfg.log_degree.max(1), LogAction::Standard);
        let shift = int(2) * (int(1) + mu.total());
        let ok = ext.interior_weights(2).iter().all(|d| {
            let c = ext.casimir(d);
            c.get(0, 1) == &shift && c.get(1, 1) == c.get(0, 0) && c.get(0, 0) == &expected && c.get(1, 0) == &int(0)
        });
        out.push(ok, "casimir_log_correction", format_rational(&shift));
    } else {
        let z = z_grading(&base)?;
        let ok = z.iter().all(|e| e.computed.as_ref() == Some(&e.predicted));
        out.push(ok, "z_eigenvalues", z.len());
        if mu.total() == int(0) && mu.is_cuspidal() {
            for k in 1..=n {
                let r = casimir_projection_check(&mu, k, cfg.radius)?;
                let dims = r.weights.first().map(|w| w.s_dim).unwrap_or(0);
                out.push(r.passed(), format!("projection_dim_k{k}"), dims);
                out.push(r.casimir_separates(), format!("casimir_separates_k{k}"), r.casimir_separates());
            }
        }
    }
    Ok(out)
}
