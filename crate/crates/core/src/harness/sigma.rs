use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub(crate) fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n, k).to_f64().unwrap_or(f64::INFINITY)
}

/// `Sigma_{n,k} = Omega_n x Pi_k`: sign vectors times `k`-subsets of `[n]`,
/// uniformly weighted, with `sigma_j(eps, S) = eps_j 1_{j in S}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaModel {
    pub n: usize,
    pub k: usize,
}

impl SigmaModel {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        Ok(SigmaModel { n, k })
    }

    /// All `k`-subsets of `0..n`, lexicographic.
    pub fn subsets(&self) -> impl Iterator<Item = Vec<usize>> {
        (0..self.n).combinations(self.k)
    }

    pub fn subset_count(&self) -> BigUint {
        binomial(self.n, self.k)
    }

    /// `sigma_j(eps, S)` with `eps` given as a bit mask (bit `j` set means
    /// `eps_j = -1`) and `j` 0-based.
    pub fn sigma(j: usize, eps: u64, subset: &[usize]) -> i64 {
        if !subset.contains(&j) {
            0
        } else if eps >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    /// `||sigma_j||_p^p` for every `j`.
    pub sigma_moments: Vec<f64>,
    /// `|| (sum_j sigma_j^2)^{1/2} ||_p^p`
    pub square_moment: f64,
    pub expected_sigma_moment: f64,
    pub expected_square_moment: f64,
    /// Whether the comparison was done in exact rational arithmetic.
    pub exact: bool,
    pub pass: bool,
}

/// Largest `Sigma_{n,k}` for which the sign vectors are enumerated too.
const FULL_ENUMERATION_BITS: usize = 12;

/// Checks `||sigma_j||_p^p = k/n` and `||(sum sigma_j^2)^{1/2}||_p^p = k^{p/2}`
/// by enumerating `Sigma_{n,k}`. For `n` above 12 the sign vectors are not
/// enumerated, both quantities being independent of `eps`.
pub fn moment_checks(n: usize, k: usize, p: f64) -> Result<MomentReport> {
    let model = SigmaModel::new(n, k)?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    if model.subset_count() > BigUint::from(10_000_000u32) {
        return Err(Error::InvalidParameter(format!("C({n},{k}) too large to enumerate")));
    }
    let even = p.fract() == 0.0 && (p as u64).is_multiple_of(2);
    let half = (p / 2.0) as u32;
    let sign_masks: Vec<u64> = if n <= FULL_ENUMERATION_BITS { (0..1u64 << n).collect() } else { vec![0] };
    let weight = BigInt::from(if n <= FULL_ENUMERATION_BITS { 1u64 } else { 1u64 << n.min(63) });

    let mut sigma_counts = vec![BigInt::zero(); n];
    let mut square_exact = BigInt::zero();
    let mut square_float = 0.0;
    let mut total = BigInt::zero();
    for subset in model.subsets() {
        for &eps in &sign_masks {
            total += &weight;
            let mut sum_sq = 0i64;
            for (j, count) in sigma_counts.iter_mut().enumerate() {
                let s = SigmaModel::sigma(j, eps, &subset);
                if s != 0 {
                    // |sigma_j|^p = 1
                    *count += &weight;
                }
                sum_sq += s * s;
            }
            if even {
                square_exact += BigInt::from(sum_sq).pow(half) * &weight;
            } else {
                square_float += (sum_sq as f64).powf(p / 2.0) * weight.to_f64().unwrap();
            }
        }
    }
    let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    let expected_sigma = BigRational::new(BigInt::from(k), BigInt::from(n));
    let sigma_exact: Vec<BigRational> = sigma_counts.into_iter().map(|c| BigRational::new(c, total.clone())).collect();
    let sigma_moments: Vec<f64> = sigma_exact.iter().map(to_f).collect();
    let expected_square_moment = (k as f64).powf(p / 2.0);
    let (square_moment, pass) = if even {
        let square = BigRational::new(square_exact, total.clone());
        let expected = BigRational::from_integer(BigInt::from(k).pow(half));
        let pass = square == expected && sigma_exact.iter().all(|s| *s == expected_sigma);
        (to_f(&square), pass)
    } else {
        let square = square_float / total.to_f64().unwrap();
        let pass = (square - expected_square_moment).abs() <= 1e-12 * expected_square_moment
            && sigma_exact.iter().all(|s| *s == expected_sigma);
        (square, pass)
    };
    Ok(MomentReport {
        n,
        k,
        p,
        sigma_moments,
        square_moment,
        expected_sigma_moment: k as f64 / n as f64,
        expected_square_moment,
        exact: even,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(4, 0), BigUint::one());
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
        for n in 0..12 {
            let row: BigUint = (0..=n).map(|k| binomial(n, k)).sum();
            assert_eq!(row, BigUint::one() << n);
        }
    }

    #[test]
    fn subsets_are_lexicographic() {
        let m = SigmaModel::new(4, 2).unwrap();
        let all: Vec<_> = m.subsets().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert!(SigmaModel::new(3, 4).is_err());
        assert!(SigmaModel::new(3, 0).is_err());
    }

    #[test]
    fn moment_examples() {
        let r = moment_checks(4, 2, 4.0).unwrap();
        assert!(r.pass && r.exact);
        assert_eq!(r.sigma_moments, vec![0.5; 4]);
        assert_eq!(r.square_moment, 4.0);
        let r = moment_checks(5, 5, 6.0).unwrap();
        assert_eq!((r.sigma_moments[0], r.square_moment), (1.0, 125.0));
        let r = moment_checks(7, 1, 2.0).unwrap();
        assert_eq!((r.sigma_moments[0], r.square_moment), (1.0 / 7.0, 1.0));
        let r = moment_checks(6, 4, 3.0).unwrap();
        assert!(r.pass && !r.exact);
        let r = moment_checks(14, 3, 4.0).unwrap();
        assert!(r.pass);
    }
}
