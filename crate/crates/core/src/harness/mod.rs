//! Inequality experiments: the Naor-type ratios on finite abelian groups
//! and the torus, the linear Rosenthal and X_p models on `Sigma_{n,k}`,
//! the Riesz square-function equivalence, free-group identities, seeded
//! scans and the acceptance battery.

mod ensemble;
mod free;
mod linear;
mod naor;
mod riesz;
mod scan;
mod sigma;
pub mod suite;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use ensemble::{random_matrices, random_vector, sample_element, Ensemble};
pub use free::{free_identities, operator_identities, IdentityCheck, IdentityReport};
pub use linear::{rosenthal_linear_ratio, xp_linear_ratio};
pub use naor::{naor_ratio, naor_terms, NaorTerms};
pub use riesz::riesz_equivalence_ratio;
pub use scan::{scan, weighted_cube_sweep, Experiment, ScanSpec, SweepPoint};
pub use sigma::{binomial, moment_checks, MomentReport, SigmaModel};
pub use suite::{run_criterion, run_suite, CriterionOutcome, SuiteReport};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "XPCHAOS_THREADS";

/// Worker pool for evaluation; sized by `XPCHAOS_THREADS` when set.
pub fn thread_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
    })
}

/// Which derivative enters the right-hand side of a Naor-type inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeChoice {
    /// `f(eps) - f(eps with the j-th sign flipped)` on `Omega_n`.
    Walsh,
    /// `partial_{e_j}` for the Euclidean cocycle on `Z^n`.
    Euclidean,
    /// Distinguished derivative `partial_j`.
    Absorbent,
    /// `D_j f`, with the adjoint term `||D_j f^*||_p^p`.
    Gradient,
}

impl DerivativeChoice {
    pub fn name(self) -> &'static str {
        match self {
            DerivativeChoice::Walsh => "walsh",
            DerivativeChoice::Euclidean => "euclidean",
            DerivativeChoice::Absorbent => "absorbent",
            DerivativeChoice::Gradient => "gradient",
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| crate::Error::Parse(format!("unknown derivative {s:?} (walsh, euclidean, absorbent, gradient)")))
    }
}

/// Outcome of one inequality experiment. For scans `lhs`, `rhs` and `ratio`
/// belong to the witness, the input attaining `max_ratio`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub experiment: String,
    pub params: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub max_ratio: f64,
    /// `rhs / lhs` of the witness of `max_inverse_ratio`, for two-sided
    /// experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_inverse_ratio: Option<f64>,
    pub witness: Value,
    pub trials: usize,
    pub seed: Option<u64>,
    pub runtime_ms: u64,
    pub monte_carlo: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl RatioReport {
    pub(crate) fn single(experiment: &str, params: Value, lhs: f64, rhs: f64, witness: Value) -> crate::Result<Self> {
        if !(rhs > 0.0 && rhs.is_finite() && lhs.is_finite()) {
            return Err(crate::Error::Numerical(format!("{experiment}: degenerate sides lhs={lhs} rhs={rhs}")));
        }
        let ratio = lhs / rhs;
        Ok(RatioReport {
            experiment: experiment.to_string(),
            params,
            lhs,
            rhs,
            ratio,
            max_ratio: ratio,
            inverse_ratio: None,
            max_inverse_ratio: None,
            witness,
            trials: 1,
            seed: None,
            runtime_ms: 0,
            monte_carlo: false,
            details: Value::Null,
        })
    }

    pub(crate) fn two_sided(mut self) -> Self {
        if self.lhs > 0.0 {
            let inv = self.rhs / self.lhs;
            self.inverse_ratio = Some(inv);
            self.max_inverse_ratio = Some(inv);
        }
        self
    }

    /// One CSV line matching [`RatioReport::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            csv_escape(&self.params.to_string()),
            self.lhs,
            self.rhs,
            self.ratio,
            self.max_ratio,
            opt(self.max_inverse_ratio),
            self.trials,
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.runtime_ms,
            self.monte_carlo
        )
    }

    pub const CSV_HEADER: &'static str =
        "experiment,params,lhs,rhs,ratio,max_ratio,max_inverse_ratio,trials,seed,runtime_ms,monte_carlo";
}

fn csv_escape(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}
