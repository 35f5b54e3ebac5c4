use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ensemble::{random_matrices, random_vector, sample_element, Ensemble};
use super::free::free_identities;
use super::linear::{rosenthal_linear_ratio, xp_linear_ratio};
use super::naor::{naor_params, naor_terms, terms_report};
use super::riesz::riesz_equivalence_ratio;
use super::{thread_pool, DerivativeChoice, RatioReport};
use crate::algebra::GroupAlgebraElement;
use crate::cocycle::{CocycleFamily, LengthCocycle};
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::norms::MatrixOperand;

/// The named experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Naor-type ratio on `Omega_n`.
    Naor,
    /// Naor-type ratio for trigonometric polynomials on `T^n`.
    Torus,
    /// Naor-type ratio on `Z_{2m}^n`.
    Ztorus,
    XpLinear,
    Rosenthal,
    Riesz,
    FreeIdentities,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Naor,
        Experiment::Torus,
        Experiment::Ztorus,
        Experiment::XpLinear,
        Experiment::Rosenthal,
        Experiment::Riesz,
        Experiment::FreeIdentities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Naor => "naor",
            Experiment::Torus => "torus",
            Experiment::Ztorus => "ztorus",
            Experiment::XpLinear => "xp-linear",
            Experiment::Rosenthal => "rosenthal",
            Experiment::Riesz => "riesz",
            Experiment::FreeIdentities => "free-identities",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|e| e.name()).collect();
            Error::InvalidParameter(format!("unknown experiment {s:?}; valid: {}", names.join(", ")))
        })
    }

    fn default_family(self, n: usize) -> CocycleFamily {
        match self {
            Experiment::Naor => CocycleFamily::Z2mWord { rank: n, m: 1 },
            Experiment::Torus => CocycleFamily::ZnWord { rank: n },
            Experiment::FreeIdentities => CocycleFamily::Free { rank: n },
            _ => CocycleFamily::Z2mWord { rank: n, m: 2 },
        }
    }

    fn default_derivative(self) -> DerivativeChoice {
        match self {
            Experiment::Naor => DerivativeChoice::Walsh,
            Experiment::Torus => DerivativeChoice::Euclidean,
            _ => DerivativeChoice::Absorbent,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_bound() -> u32 {
    3
}

fn default_dim() -> usize {
    4
}

fn default_trials() -> usize {
    1
}

fn default_ensemble() -> Ensemble {
    Ensemble::Gaussian
}

fn default_p() -> f64 {
    2.0
}

/// Parameters of a seeded scan. `k = None` scans every `k` in `1..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub experiment: Experiment,
    pub n: usize,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_p")]
    pub p: f64,
    /// Defaults: hypercube for `naor`, `Z_4^n` word length for `ztorus` and
    /// `riesz`, `Z^n` word length for `torus`, `F_n` for `free-identities`.
    #[serde(default)]
    pub family: Option<CocycleFamily>,
    #[serde(default)]
    pub derivative: Option<DerivativeChoice>,
    /// Frequency bound of torus inputs, word length bound of free checks.
    #[serde(default = "default_bound")]
    pub bound: u32,
    /// Matrix size for `xp-linear`.
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_ensemble")]
    pub ensemble: Ensemble,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

/// A sampled input of any experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Input {
    Element(GroupAlgebraElement),
    Vector(Vec<Complex64>),
    Matrices(Vec<MatrixOperand>),
}

struct Trial {
    best: RatioReport,
    ratios: Vec<f64>,
    max_inverse: Option<f64>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

impl ScanSpec {
    pub fn new(experiment: Experiment, n: usize) -> Self {
        ScanSpec {
            experiment,
            n,
            k: None,
            p: default_p(),
            family: None,
            derivative: None,
            bound: default_bound(),
            dim: default_dim(),
            ensemble: default_ensemble(),
            trials: default_trials(),
            seed: 0,
        }
    }

    pub fn family(&self) -> CocycleFamily {
        self.family.clone().unwrap_or_else(|| self.experiment.default_family(self.n))
    }

    pub fn derivative(&self) -> DerivativeChoice {
        self.derivative.unwrap_or_else(|| self.experiment.default_derivative())
    }

    fn cocycle(&self) -> Result<LengthCocycle> {
        LengthCocycle::build(self.family())
    }

    /// Group the inputs are sampled from.
    fn group(&self, c: &LengthCocycle) -> GroupDescriptor {
        match c.group() {
            GroupDescriptor::Torus { rank, .. } => GroupDescriptor::Torus { rank: *rank, bound: self.bound },
            g => g.clone(),
        }
    }

    /// Range checks done before any work.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be at least 1".into()));
        }
        if let Some(k) = self.k {
            if k == 0 || k > self.n {
                return Err(invalid(format!("k must lie in 1..={}, got {k}", self.n)));
            }
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(invalid(format!("p must be finite and at least 1, got {}", self.p)));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1".into()));
        }
        let family = self.family();
        if family.rank() != self.n {
            return Err(invalid(format!("family {family} does not have rank n={}", self.n)));
        }
        let c = self.cocycle()?;
        let group = self.group(&c);
        let fits = match self.experiment {
            Experiment::Naor => group.moduli().is_some_and(|m| m.iter().all(|&q| q == 2)),
            Experiment::Ztorus | Experiment::Riesz => group.moduli().is_some() || matches!(group, GroupDescriptor::Torus { .. }),
            Experiment::Torus => matches!(group, GroupDescriptor::Torus { .. }),
            Experiment::FreeIdentities => group.is_free_kind(),
            Experiment::XpLinear | Experiment::Rosenthal => true,
        };
        if !fits {
            return Err(invalid(format!("family {family} does not fit experiment {}", self.experiment)));
        }
        if self.experiment == Experiment::Ztorus && group.moduli().is_none() {
            return Err(invalid(format!("ztorus needs a finite abelian family, got {family}")));
        }
        if matches!(self.experiment, Experiment::Riesz) && !c.has_basis() {
            return Err(c.unsupported("Riesz transforms"));
        }
        if matches!(self.experiment, Experiment::XpLinear) && self.dim == 0 {
            return Err(invalid("matrix dimension must be at least 1".into()));
        }
        Ok(())
    }

    fn ks(&self) -> Vec<usize> {
        match self.k {
            Some(k) => vec![k],
            None => (1..=self.n).collect(),
        }
    }

    fn params(&self) -> Value {
        let mut params = match self.experiment {
            Experiment::Naor | Experiment::Torus | Experiment::Ztorus => {
                let c = self.cocycle().expect("validated");
                naor_params(self.n, self.k, self.p, &c, self.derivative())
            }
            Experiment::XpLinear => json!({"n": self.n, "k": self.k, "p": self.p, "d": self.dim}),
            Experiment::Rosenthal => json!({"n": self.n, "k": self.k, "p": self.p}),
            Experiment::Riesz => json!({"n": self.n, "p": self.p, "family": self.family()}),
            Experiment::FreeIdentities => json!({"n": self.n, "family": self.family(), "max_len": self.bound}),
        };
        params["ensemble"] = json!(self.ensemble);
        if matches!(self.experiment, Experiment::Torus) {
            params["bound"] = json!(self.bound);
        }
        params
    }

    fn sample(&self, group: &GroupDescriptor, rng: &mut ChaCha8Rng) -> Result<Input> {
        Ok(match self.experiment {
            Experiment::Rosenthal => loop {
                let a = random_vector(self.n, self.ensemble, rng)?;
                if a.iter().any(|z| z.norm() > 0.0) {
                    break Input::Vector(a);
                }
            },
            Experiment::XpLinear => Input::Matrices(random_matrices(self.n, self.dim, rng)),
            _ => Input::Element(sample_element(group, self.ensemble, rng)?),
        })
    }

    /// Every `k` of one input; the report of the worst `k`.
    fn evaluate(&self, input: &Input, c: &LengthCocycle) -> Result<Trial> {
        let ks = self.ks();
        match (self.experiment, input) {
            (Experiment::Naor | Experiment::Torus | Experiment::Ztorus, Input::Element(f)) => {
                let terms = naor_terms(f, self.p, c, self.derivative())?;
                let ratios: Vec<f64> = ks.iter().map(|&k| terms.ratio(k)).collect();
                let k = ks.iter().copied().fold(ks[0], |b, k| if terms.ratio(k) > terms.ratio(b) { k } else { b });
                Ok(Trial { best: terms_report(&terms, k, f, self.params())?, ratios, max_inverse: None })
            }
            (Experiment::Riesz, Input::Element(f)) => {
                let r = riesz_equivalence_ratio(f, self.p, c)?;
                Ok(Trial { ratios: vec![r.ratio], max_inverse: r.inverse_ratio, best: r })
            }
            (Experiment::Rosenthal | Experiment::XpLinear, _) => {
                let reports: Vec<RatioReport> = ks
                    .iter()
                    .map(|&k| match input {
                        Input::Vector(a) => rosenthal_linear_ratio(a, self.p, k),
                        Input::Matrices(xs) => xp_linear_ratio(xs, self.p, k),
                        Input::Element(_) => Err(invalid("input does not match the experiment".into())),
                    })
                    .collect::<Result<_>>()?;
                let ratios = reports.iter().map(|r| r.ratio).collect();
                let max_inverse = reports.iter().filter_map(|r| r.inverse_ratio).reduce(f64::max);
                let best = reports.into_iter().reduce(|a, b| if b.ratio > a.ratio { b } else { a }).unwrap();
                Ok(Trial { best, ratios, max_inverse })
            }
            _ => Err(invalid("input does not match the experiment".into())),
        }
    }

    /// Re-evaluate a stored witness `{k, input}`.
    pub fn evaluate_witness(&self, witness: &Value) -> Result<RatioReport> {
        self.validate()?;
        let input: Input = serde_json::from_value(witness["input"].clone())
            .map_err(|e| Error::Parse(format!("witness input: {e}")))?;
        let mut spec = self.clone();
        if let Some(k) = witness["k"].as_u64() {
            spec.k = Some(k as usize);
        }
        let c = spec.cocycle()?;
        Ok(spec.evaluate(&input, &c)?.best)
    }
}

/// Run a scan: inputs are drawn sequentially from the seed, evaluated in
/// parallel and reduced in trial order, so the report depends only on the
/// spec.
pub fn scan(spec: &ScanSpec) -> Result<RatioReport> {
    spec.validate()?;
    let start = Instant::now();
    if spec.experiment == Experiment::FreeIdentities {
        return free_report(spec, start);
    }
    let c = spec.cocycle()?;
    let group = spec.group(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let inputs: Vec<Input> = (0..spec.trials).map(|_| spec.sample(&group, &mut rng)).collect::<Result<_>>()?;
    let trials: Vec<Trial> =
        thread_pool().install(|| inputs.par_iter().map(|input| spec.evaluate(input, &c)).collect::<Result<_>>())?;

    let mut witness_trial = 0;
    let mut by_k = vec![f64::NEG_INFINITY; trials[0].ratios.len()];
    let mut max_inverse: Option<f64> = None;
    for (i, t) in trials.iter().enumerate() {
        if t.best.ratio > trials[witness_trial].best.ratio {
            witness_trial = i;
        }
        for (m, r) in by_k.iter_mut().zip(&t.ratios) {
            *m = m.max(*r);
        }
        if let Some(inv) = t.max_inverse {
            max_inverse = Some(max_inverse.map_or(inv, |m| m.max(inv)));
        }
    }
    let best = &trials[witness_trial].best;
    let mut report = best.clone();
    report.experiment = spec.experiment.name().into();
    report.params = spec.params();
    report.max_ratio = best.ratio;
    report.max_inverse_ratio = max_inverse;
    report.trials = spec.trials;
    report.seed = Some(spec.seed);
    report.monte_carlo = trials.iter().any(|t| t.best.monte_carlo);
    let ks: Vec<Value> = spec.ks().into_iter().map(Value::from).collect();
    report.details = json!({
        "witness_trial": witness_trial,
        "k_values": ks,
        "max_ratio_by_k": by_k,
        "witness_details": best.details,
    });
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn free_report(spec: &ScanSpec, start: Instant) -> Result<RatioReport> {
    let identities = free_identities(spec.family(), spec.bound as u64)?;
    let failing = identities.checks.iter().filter(|c| !c.pass).count();
    let mut report = RatioReport::single(
        spec.experiment.name(),
        spec.params(),
        failing as f64,
        identities.checks.len() as f64,
        Value::Null,
    )?;
    report.seed = Some(spec.seed);
    report.details = serde_json::to_value(&identities).map_err(|e| Error::Numerical(e.to_string()))?;
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Largest Naor ratio on the weighted hypercube with all weights equal to
/// `alpha`, gradient derivatives.
#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Smallest nonzero length, `4 alpha`.
    pub gap: f64,
    pub max_ratio: f64,
}

pub fn weighted_cube_sweep(n: usize, p: f64, alphas: &[f64], trials: usize, seed: u64) -> Result<Vec<SweepPoint>> {
    alphas
        .iter()
        .map(|&alpha| {
            let mut spec = ScanSpec::new(Experiment::Naor, n);
            spec.p = p;
            spec.family = Some(CocycleFamily::WeightedCube { alpha: vec![alpha; n] });
            spec.derivative = Some(DerivativeChoice::Gradient);
            spec.trials = trials;
            spec.seed = seed;
            let r = scan(&spec)?;
            Ok(SweepPoint { alpha, gap: 4.0 * alpha, max_ratio: r.max_ratio })
        })
        .collect()
}
