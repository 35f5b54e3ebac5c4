use itertools::Itertools;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{thread_pool, RatioReport};
use crate::error::{Error, Result};
use crate::norms::{schatten_norm, MatrixOperand};

/// Largest `n` for which subsets and signs are enumerated exhaustively.
pub const EXHAUSTIVE_MAX_N: usize = 14;

/// Draws used above [`EXHAUSTIVE_MAX_N`].
pub const MONTE_CARLO_SAMPLES: usize = 1 << 14;

const MONTE_CARLO_SEED: u64 = 0x7870_6368;

fn check(n: usize, k: usize, p: f64) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be finite and at least 1, got {p}")));
    }
    Ok(())
}

/// `(1/C(n,k)) sum_{|S|=k} E_eps F(S, eps)` with `F` even in `eps`, so the
/// first sign of each subset is fixed. Subsets are 0-based.
fn exhaustive_average<F>(n: usize, k: usize, eval: F) -> Result<f64>
where
    F: Fn(&[usize], &[f64]) -> Result<f64> + Sync,
{
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let half = 1usize << (k - 1);
    let sums: Vec<f64> = thread_pool().install(|| {
        subsets
            .par_iter()
            .map(|s| {
                let mut acc = 0.0;
                for mask in 0..half {
                    let signs: Vec<f64> =
                        (0..k).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect();
                    acc += eval(s, &signs)?;
                }
                Ok(acc / half as f64)
            })
            .collect::<Result<_>>()
    })?;
    Ok(sums.iter().sum::<f64>() / subsets.len() as f64)
}

/// Same average over pre-drawn uniform `(S, eps)` pairs.
fn sampled_average<F>(n: usize, k: usize, seed: u64, eval: F) -> Result<f64>
where
    F: Fn(&[usize], &[f64]) -> Result<f64> + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(Vec<usize>, Vec<f64>)> = (0..MONTE_CARLO_SAMPLES)
        .map(|_| {
            let mut s = sample(&mut rng, n, k).into_vec();
            s.sort_unstable();
            let signs = (0..k).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
            (s, signs)
        })
        .collect();
    let values: Vec<f64> =
        thread_pool().install(|| draws.par_iter().map(|(s, e)| eval(s, e)).collect::<Result<_>>())?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

fn average<F>(n: usize, k: usize, eval: F) -> Result<(f64, bool)>
where
    F: Fn(&[usize], &[f64]) -> Result<f64> + Sync,
{
    if n <= EXHAUSTIVE_MAX_N {
        Ok((exhaustive_average(n, k, eval)?, false))
    } else {
        Ok((sampled_average(n, k, MONTE_CARLO_SEED ^ k as u64, eval)?, true))
    }
}

fn scalar_sum(a: &[Complex64], subset: &[usize], signs: &[f64]) -> Complex64 {
    subset.iter().zip(signs).map(|(&j, &e)| a[j] * e).sum()
}

/// Linear Rosenthal model on `Sigma_{n,k}`: `LHS = ||sum_j a_j sigma_j||_p`
/// against `((k/n) sum |a_j|^p)^{1/p} + ((k/n) sum |a_j|^2)^{1/2}`, both ways.
pub fn rosenthal_linear_ratio(a: &[Complex64], p: f64, k: usize) -> Result<RatioReport> {
    let n = a.len();
    check(n, k, p)?;
    let (lhs_pp, monte_carlo) = average(n, k, |s, e| Ok(scalar_sum(a, s, e).norm().powf(p)))?;
    let t = k as f64 / n as f64;
    let lp: f64 = a.iter().map(|z| z.norm().powf(p)).sum();
    let l2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let lhs = lhs_pp.powf(1.0 / p);
    let rhs = (t * lp).powf(1.0 / p) + (t * l2).sqrt();
    let witness = json!({"k": k, "input": a});
    let mut report = RatioReport::single("rosenthal", json!({"n": n, "k": k, "p": p}), lhs, rhs, witness)?.two_sided();
    report.monte_carlo = monte_carlo;
    report.details = json!({"lhs_pp": lhs_pp, "samples": monte_carlo.then_some(MONTE_CARLO_SAMPLES)});
    Ok(report)
}

/// Linear `X_p` model for matrices:
/// `(1/C(n,k)) sum_{|S|=k} E ||sum_{j in S} eps_j x_j||_p^p` against
/// `(k/n) sum_j ||x_j||_p^p + (k/n)^{p/2} E ||sum_j eps_j x_j||_p^p`.
pub fn xp_linear_ratio(xs: &[MatrixOperand], p: f64, k: usize) -> Result<RatioReport> {
    let n = xs.len();
    check(n, k, p)?;
    let d = MatrixOperand::combination(xs, &vec![0.0; n])?.dim();
    let eval = |s: &[usize], e: &[f64]| -> Result<f64> {
        let picked: Vec<MatrixOperand> = s.iter().map(|&j| xs[j].clone()).collect();
        Ok(schatten_norm(&MatrixOperand::combination(&picked, e)?, p)?.powf(p))
    };
    let (lhs, monte_carlo) = average(n, k, eval)?;
    let (sign_average, _) = average(n, n, eval)?;
    let derivative_sum: f64 = xs.iter().map(|x| Ok(schatten_norm(x, p)?.powf(p))).sum::<Result<f64>>()?;
    let t = k as f64 / n as f64;
    let rhs = t * derivative_sum + t.powf(p / 2.0) * sign_average;
    let witness = json!({"k": k, "input": xs});
    let mut report = RatioReport::single("xp-linear", json!({"n": n, "k": k, "p": p, "d": d}), lhs, rhs, witness)?;
    report.monte_carlo = monte_carlo;
    report.details = json!({
        "derivative_sum": derivative_sum,
        "sign_average": sign_average,
        "samples": monte_carlo.then_some(MONTE_CARLO_SAMPLES),
        "warning": (p < 2.0).then_some("p below 2 lies outside the range of the inequality"),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupAlgebraElement;
    use crate::cocycle::{CocycleFamily, LengthCocycle};
    use crate::group::{GroupDescriptor, GroupElement};
    use crate::harness::{naor_terms, random_matrices, random_vector, DerivativeChoice, Ensemble};

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn rosenthal_examples() {
        for n in 1..=7 {
            let mut a = vec![real(0.0); n];
            a[0] = real(1.0);
            for k in 1..=n {
                for p in [2.0, 3.0, 4.0] {
                    let r = rosenthal_linear_ratio(&a, p, k).unwrap();
                    assert!((r.lhs.powf(p) - k as f64 / n as f64).abs() < 1e-12);
                }
                let ones = vec![real(1.0); n];
                let r = rosenthal_linear_ratio(&ones, 2.0, k).unwrap();
                assert!((r.lhs - (k as f64).sqrt()).abs() < 1e-12);
                assert_eq!(r.inverse_ratio, Some(r.rhs / r.lhs));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_vector(6, Ensemble::Gaussian, &mut rng).unwrap();
        let r = rosenthal_linear_ratio(&a, 2.0, 6).unwrap();
        let l2 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((r.lhs - l2).abs() < 1e-12);
    }

    #[test]
    fn xp_closures() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [3, 5] {
            let xs = random_matrices(n, 3, &mut rng);
            let frob: f64 = xs.iter().map(|x| schatten_norm(x, 2.0).unwrap().powi(2)).sum();
            for k in 1..=n {
                let r = xp_linear_ratio(&xs, 2.0, k).unwrap();
                assert!((r.lhs - k as f64 / n as f64 * frob).abs() < 1e-9);
                assert!(r.ratio <= 1.0 + 1e-12);
            }
            let r = xp_linear_ratio(&xs, 4.0, n).unwrap();
            assert!((r.lhs - r.details["sign_average"].as_f64().unwrap()).abs() < 1e-9 * r.lhs);
            assert!(r.ratio <= 1.0);
        }
    }

    #[test]
    fn scalar_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_vector(6, Ensemble::Gaussian, &mut rng).unwrap();
        let xs: Vec<MatrixOperand> = a.iter().map(|&z| MatrixOperand::diagonal(&[z])).collect();
        for k in 1..=6 {
            let x = xp_linear_ratio(&xs, 4.0, k).unwrap();
            let r = rosenthal_linear_ratio(&a, 4.0, k).unwrap();
            assert!((x.lhs - r.lhs.powf(4.0)).abs() < 1e-10 * x.lhs);
        }
    }

    #[test]
    fn naor_on_linear_span_is_rosenthal() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 7;
        let a = random_vector(n, Ensemble::Gaussian, &mut rng).unwrap();
        let group = GroupDescriptor::hypercube(n);
        let coeffs = (0..n).map(|j| {
            let mut t = vec![0; n];
            t[j] = 1;
            (GroupElement::Tuple(t), a[j])
        });
        let f = GroupAlgebraElement::from_coeffs(group, coeffs).unwrap();
        let c = LengthCocycle::build(CocycleFamily::Z2mWord { rank: n, m: 1 }).unwrap();
        for p in [2.0, 3.0, 4.0] {
            let terms = naor_terms(&f, p, &c, DerivativeChoice::Walsh).unwrap();
            for k in 1..=n {
                let r = rosenthal_linear_ratio(&a, p, k).unwrap();
                assert!((terms.lhs(k) - r.lhs.powf(p)).abs() < 1e-10 * terms.lhs(k).max(1.0));
            }
        }
    }

    #[test]
    fn monte_carlo_above_the_cap() {
        let a = vec![real(1.0); 16];
        let r = rosenthal_linear_ratio(&a, 2.0, 3).unwrap();
        assert!(r.monte_carlo);
        assert!((r.lhs - 3f64.sqrt()).abs() < 0.05);
        assert_eq!(r.details["samples"], MONTE_CARLO_SAMPLES);
        assert_eq!(rosenthal_linear_ratio(&a, 2.0, 3).unwrap(), r);
        assert!(!rosenthal_linear_ratio(&a[..14], 2.0, 3).unwrap().monte_carlo);
    }

    #[test]
    fn validation() {
        assert!(rosenthal_linear_ratio(&[real(1.0)], 2.0, 2).is_err());
        assert!(rosenthal_linear_ratio(&[], 2.0, 1).is_err());
        assert!(rosenthal_linear_ratio(&[real(1.0)], 0.5, 1).is_err());
        let xs = vec![MatrixOperand::identity(2), MatrixOperand::identity(3)];
        assert!(xp_linear_ratio(&xs, 2.0, 1).is_err());
        let r = xp_linear_ratio(&[MatrixOperand::identity(2)], 1.5, 1).unwrap();
        assert!(r.details["warning"].is_string());
    }
}
