use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LengthCocycle;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::tolerance::CONDITIONAL_NEGATIVITY;

const DIRECT_TRIALS: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct NegativityReport {
    pub sample_size: usize,
    /// `(t, minimum eigenvalue of [exp(-t psi(a^{-1} b))])`
    pub min_eigenvalues: Vec<(f64, f64)>,
    /// Largest `sum_{g,h} a_g a_h psi(g^{-1} h)` over random mean-zero `a`.
    pub max_direct_form: f64,
    pub pass: bool,
}

/// Schoenberg test of a length function on a finite sample.
///
/// For every `t` the kernel `exp(-t psi(a^{-1} b))` must be positive
/// semidefinite; the direct definition of conditional negativity is checked
/// on random mean-zero real vectors.
pub fn conditional_negativity_check(
    group: &GroupDescriptor,
    psi: impl Fn(&GroupElement) -> f64,
    sample: &[GroupElement],
    t_grid: &[f64],
    seed: u64,
) -> Result<NegativityReport> {
    if sample.is_empty() {
        return Err(Error::Precondition("empty sample".into()));
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidParameter("kernel parameters t must be positive".into()));
    }
    let n = sample.len();
    let dist = DMatrix::from_fn(n, n, |a, b| psi(&group.mul(&group.inverse(&sample[a]), &sample[b])));

    let mut min_eigenvalues = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let kernel = dist.map(|d| (-t * d).exp());
        let eig = SymmetricEigen::new(kernel).eigenvalues;
        min_eigenvalues.push((t, eig.min()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_direct_form = if n == 1 { 0.0 } else { f64::NEG_INFINITY };
    if n > 1 {
        for _ in 0..DIRECT_TRIALS {
            let mut a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mean = a.iter().sum::<f64>() / n as f64;
            a.iter_mut().for_each(|x| *x -= mean);
            let v = nalgebra::DVector::from_vec(a);
            max_direct_form = max_direct_form.max(v.dot(&(&dist * &v)));
        }
    }

    let pass = min_eigenvalues.iter().all(|&(_, l)| l >= -CONDITIONAL_NEGATIVITY)
        && max_direct_form <= CONDITIONAL_NEGATIVITY;
    Ok(NegativityReport { sample_size: n, min_eigenvalues, max_direct_form, pass })
}

impl LengthCocycle {
    pub fn negativity_check(&self, sample: &[GroupElement], t_grid: &[f64], seed: u64) -> Result<NegativityReport> {
        conditional_negativity_check(&self.group, |g| self.psi(g), sample, t_grid, seed)
    }
}

/// `size` distinct random elements of the cocycle's group, the identity first.
/// Torus coordinates lie in `-3..=3`, words have at most 4 syllables.
pub fn random_sample(cocycle: &LengthCocycle, size: usize, seed: u64) -> Result<Vec<GroupElement>> {
    if size == 0 {
        return Err(Error::InvalidParameter("sample size must be positive".into()));
    }
    let group = cocycle.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = group.identity();
    let mut seen = BTreeSet::from([e.clone()]);
    let mut out = vec![e];
    let capacity = group.order().unwrap_or(usize::MAX);
    let mut attempts = 0;
    while out.len() < size.min(capacity) && attempts < 100 * size {
        attempts += 1;
        let g = match group {
            GroupDescriptor::FiniteAbelian { moduli } => {
                GroupElement::Tuple(moduli.iter().map(|&m| rng.random_range(0..m as i64)).collect())
            }
            GroupDescriptor::Torus { rank, .. } => {
                GroupElement::Tuple((0..*rank).map(|_| rng.random_range(-3..=3)).collect())
            }
            GroupDescriptor::Free { rank } | GroupDescriptor::FreeProduct { rank, .. } => {
                let kind = group.word_kind().unwrap();
                let q = kind.modulus().map(|q| q as i64);
                let syllables = rng.random_range(1..=4);
                let raw: Vec<(usize, i64)> = (0..syllables)
                    .map(|_| {
                        let gen = rng.random_range(1..=*rank);
                        let exp = match q {
                            Some(q) => rng.random_range(1..q),
                            None => {
                                let e = rng.random_range(1..=2);
                                if rng.random_bool(0.5) { e } else { -e }
                            }
                        };
                        (gen, exp)
                    })
                    .collect();
                GroupElement::Word(kind.reduce(&raw)?)
            }
        };
        if seen.insert(g.clone()) {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::CocycleFamily;

    fn t(x: i64) -> GroupElement {
        GroupElement::Tuple(vec![x])
    }

    #[test]
    fn word_length_on_z() {
        let c = LengthCocycle::build(CocycleFamily::ZnWord { rank: 1 }).unwrap();
        let r = c.negativity_check(&[t(0), t(1), t(2)], &[1.0], 1).unwrap();
        assert!(r.pass);
        // oracle: [[1,a,b],[a,1,a],[b,a,1]] with a = 1/e, b = a^2 has the
        // eigenvalue 1 - b on (1,0,-1) and those of [[1+b, sqrt2 a],[sqrt2 a, 1]]
        let a = (-1.0f64).exp();
        let b = a * a;
        let expected = (1.0 - b).min(1.0 + b / 2.0 - (b * b / 4.0 + 2.0 * a * a).sqrt());
        assert!((r.min_eigenvalues[0].1 - expected).abs() < 1e-12);
        assert!(r.min_eigenvalues[0].1 > 0.0);
    }

    #[test]
    fn invalid_length_fails() {
        let g = GroupDescriptor::Torus { rank: 1, bound: 0 };
        let psi = |x: &GroupElement| if x.as_tuple().unwrap()[0] == 0 { 0.0 } else { -1.0 };
        let r = conditional_negativity_check(&g, psi, &[t(0), t(1), t(2)], &[0.1, 10.0], 0).unwrap();
        assert!(!r.pass);
        assert!(r.min_eigenvalues[1].1 < -1.0);
    }

    #[test]
    fn singleton_sample() {
        let c = LengthCocycle::build(CocycleFamily::Free { rank: 2 }).unwrap();
        let r = c.negativity_check(&[c.group().identity()], &[1.0], 0).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_eigenvalues, vec![(1.0, 1.0)]);
        assert!(c.negativity_check(&[], &[1.0], 0).is_err());
    }

    #[test]
    fn builtin_families_pass() {
        for fam in CocycleFamily::all_builtin(3) {
            let c = LengthCocycle::build(fam).unwrap();
            for seed in 0..3 {
                let sample = random_sample(&c, 12, seed).unwrap();
                assert!(c.group().is_identity(&sample[0]));
                let r = c.negativity_check(&sample, &[0.1, 1.0, 10.0], seed).unwrap();
                assert!(r.pass, "{} seed {seed}: {r:?}", c.family());
            }
        }
    }
}
