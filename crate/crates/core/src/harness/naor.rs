use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::sigma::binomial_f64;
use super::{DerivativeChoice, RatioReport};
use crate::algebra::{adjoint, GroupAlgebraElement};
use crate::cocycle::{BasisVectorId, CocycleFamily, LengthCocycle};
use crate::dual::active_values;
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::norms::{lp_norm, square_function_norm, SquareFunctionOperand};
use crate::operators::{absorbent_derivative, directional_derivative, gradient, truncate, walsh_derivative};

/// Both sides of the Naor-type inequality for one input, for every `k`.
#[derive(Clone, Debug, Serialize)]
pub struct NaorTerms {
    pub n: usize,
    pub p: f64,
    pub derivative: DerivativeChoice,
    /// `(1/C(n,k)) sum_{|S|=k} ||E_S f||_p^p` at index `k - 1`.
    pub lhs_by_k: Vec<f64>,
    /// `||d_j f||_p^p` for `j = 1..n`.
    pub derivative_terms: Vec<f64>,
    /// `||d_j f^*||_p^p` for `j = 1..n`.
    pub adjoint_terms: Vec<f64>,
    /// `||f||_p^p`
    pub norm_pp: f64,
}

impl NaorTerms {
    pub fn derivative_sum(&self) -> f64 {
        self.derivative_terms.iter().sum()
    }

    pub fn adjoint_sum(&self) -> f64 {
        self.adjoint_terms.iter().sum()
    }

    pub fn lhs(&self, k: usize) -> f64 {
        self.lhs_by_k[k - 1]
    }

    /// `(k/n) sum_j (derivative term)_j + (k/n)^{p/2} ||f||_p^p`. Only the
    /// gradient carries the adjoint term.
    pub fn rhs(&self, k: usize) -> f64 {
        let t = k as f64 / self.n as f64;
        let derivative = match self.derivative {
            DerivativeChoice::Gradient => self.derivative_sum() + self.adjoint_sum(),
            _ => self.derivative_sum(),
        };
        t * derivative + t.powf(self.p / 2.0) * self.norm_pp
    }

    pub fn ratio(&self, k: usize) -> f64 {
        self.lhs(k) / self.rhs(k)
    }

    /// The `k` with the largest ratio (smallest on ties).
    pub fn worst_k(&self) -> usize {
        (1..=self.n).fold(1, |best, k| if self.ratio(k) > self.ratio(best) { k } else { best })
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k must lie in 1..={n}, got {k}")));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be finite and at least 1, got {p}")));
    }
    Ok(())
}

fn norm_pp(f: &GroupAlgebraElement, p: f64) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    Ok(lp_norm(f, p)?.powf(p))
}

fn mean_power(values: &[Complex64], p: f64) -> f64 {
    values.iter().map(|z| z.norm().powf(p)).sum::<f64>() / values.len() as f64
}

fn active_coordinates(f: &GroupAlgebraElement) -> Vec<usize> {
    (0..f.group().rank()).filter(|&j| f.support().any(|g| g.as_tuple().is_some_and(|t| t[j] != 0))).collect()
}

/// `||E_R f||_p^p` for every subset `R` of the active coordinates, indexed
/// by bit mask over the active list.
fn conditional_norms(f: &GroupAlgebraElement, p: f64, active: &[usize]) -> Result<Vec<f64>> {
    let a = active.len();
    let full = (1usize << a) - 1;
    match f.group() {
        GroupDescriptor::FiniteAbelian { moduli } => {
            // E_R f is f averaged over the coordinates outside R
            let dims: Vec<usize> = active.iter().map(|&j| moduli[j] as usize).collect();
            let mut arrays: Vec<Vec<Complex64>> = vec![Vec::new(); full + 1];
            arrays[full] = active_values(f)?;
            for r in (0..full).rev() {
                let j = (!r).trailing_zeros() as usize;
                let parent = r | 1 << j;
                let kept: Vec<usize> = (0..a).filter(|&i| parent >> i & 1 == 1).collect();
                let pos = kept.iter().position(|&i| i == j).unwrap();
                let outer: usize = kept[..pos].iter().map(|&i| dims[i]).product();
                let inner: usize = kept[pos + 1..].iter().map(|&i| dims[i]).product();
                let m = dims[j];
                let src = &arrays[parent];
                let mut out = vec![Complex64::default(); outer * inner];
                for o in 0..outer {
                    for x in 0..m {
                        let row = &src[(o * m + x) * inner..(o * m + x + 1) * inner];
                        for (acc, v) in out[o * inner..(o + 1) * inner].iter_mut().zip(row) {
                            *acc += v;
                        }
                    }
                }
                let scale = 1.0 / m as f64;
                out.iter_mut().for_each(|z| *z *= scale);
                arrays[r] = out;
            }
            Ok(arrays.iter().map(|v| mean_power(v, p)).collect())
        }
        GroupDescriptor::Torus { .. } => (0..=full)
            .map(|r| {
                let subset: Vec<usize> = (0..a).filter(|&i| r >> i & 1 == 1).map(|i| active[i] + 1).collect();
                norm_pp(&truncate(f, &subset)?, p)
            })
            .collect(),
        g => Err(Error::Unsupported { op: "Naor ratio (no L_p norm on free groups)", kind: g.to_string() }),
    }
}

fn derivative_term(f: &GroupAlgebraElement, p: f64, j: usize, c: &LengthCocycle, choice: DerivativeChoice) -> Result<f64> {
    match choice {
        DerivativeChoice::Walsh => norm_pp(&walsh_derivative(f, j)?, p),
        DerivativeChoice::Euclidean => {
            let e = LengthCocycle::build(CocycleFamily::Euclidean { rank: f.group().rank() })?;
            norm_pp(&directional_derivative(f, &BasisVectorId::Euclidean { j }, &e)?, p)
        }
        DerivativeChoice::Absorbent => norm_pp(&absorbent_derivative(f, j, c)?, p),
        DerivativeChoice::Gradient => {
            let grad = gradient(f, j, c)?;
            if grad.is_empty() {
                return Ok(0.0);
            }
            Ok(square_function_norm(&SquareFunctionOperand::abelian(grad.elements())?, p)?.powf(p))
        }
    }
}

fn check_choice(group: &GroupDescriptor, choice: DerivativeChoice) -> Result<()> {
    let ok = match choice {
        DerivativeChoice::Walsh => group.moduli().is_some_and(|m| m.iter().all(|&q| q == 2)),
        DerivativeChoice::Euclidean => matches!(group, GroupDescriptor::Torus { .. }),
        DerivativeChoice::Absorbent | DerivativeChoice::Gradient => group.is_abelian(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported { op: choice.name(), kind: group.to_string() })
    }
}

/// All quantities of the Naor-type inequality for a mean-zero `f`.
pub fn naor_terms(f: &GroupAlgebraElement, p: f64, c: &LengthCocycle, choice: DerivativeChoice) -> Result<NaorTerms> {
    check_p(p)?;
    c.check_group(f.group())?;
    check_choice(f.group(), choice)?;
    f.require_mean_zero()?;
    let n = f.group().rank();
    let active = active_coordinates(f);
    let norms = conditional_norms(f, p, &active)?;
    let a = active.len();
    let lhs_by_k = (1..=n)
        .map(|k| {
            let total: f64 = norms
                .iter()
                .enumerate()
                .map(|(r, v)| {
                    let size = r.count_ones() as usize;
                    if size > k || k - size > n - a {
                        0.0
                    } else {
                        binomial_f64(n - a, k - size) * v
                    }
                })
                .sum();
            total / binomial_f64(n, k)
        })
        .collect();
    let star = adjoint(f);
    let derivative_terms = (1..=n).map(|j| derivative_term(f, p, j, c, choice)).collect::<Result<_>>()?;
    let adjoint_terms = (1..=n).map(|j| derivative_term(&star, p, j, c, choice)).collect::<Result<_>>()?;
    Ok(NaorTerms { n, p, derivative: choice, lhs_by_k, derivative_terms, adjoint_terms, norm_pp: norms[(1 << a) - 1] })
}

/// Experiment label for the group an input lives on.
pub(crate) fn experiment_name(group: &GroupDescriptor) -> &'static str {
    match group {
        GroupDescriptor::FiniteAbelian { moduli } if moduli.iter().all(|&q| q == 2) => "naor",
        GroupDescriptor::Torus { .. } => "torus",
        _ => "ztorus",
    }
}

pub(crate) fn naor_params(n: usize, k: Option<usize>, p: f64, c: &LengthCocycle, choice: DerivativeChoice) -> serde_json::Value {
    json!({"n": n, "k": k, "p": p, "family": c.family(), "derivative": choice})
}

pub(crate) fn terms_report(terms: &NaorTerms, k: usize, f: &GroupAlgebraElement, params: serde_json::Value) -> Result<RatioReport> {
    let mut report = RatioReport::single(
        experiment_name(f.group()),
        params,
        terms.lhs(k),
        terms.rhs(k),
        json!({"k": k, "input": f}),
    )?;
    report.details = json!({
        "derivative_sum": terms.derivative_sum(),
        "adjoint_sum": terms.adjoint_sum(),
        "norm_pp": terms.norm_pp,
    });
    Ok(report)
}

/// `LHS / RHS` of the Naor-type inequality at a fixed `k`.
pub fn naor_ratio(f: &GroupAlgebraElement, p: f64, k: usize, c: &LengthCocycle, choice: DerivativeChoice) -> Result<RatioReport> {
    let n = f.group().rank();
    check_k(k, n)?;
    let terms = naor_terms(f, p, c, choice)?;
    terms_report(&terms, k, f, naor_params(n, Some(k), p, c, choice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::harness::{sample_element, Ensemble};
    use itertools::Itertools;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cube(n: usize) -> LengthCocycle {
        LengthCocycle::build(CocycleFamily::Z2mWord { rank: n, m: 1 }).unwrap()
    }

    fn walsh(n: usize, subset: &[usize]) -> GroupAlgebraElement {
        let t: Vec<i64> = (1..=n).map(|j| subset.contains(&j) as i64).collect();
        GroupAlgebraElement::basis(GroupDescriptor::hypercube(n), GroupElement::Tuple(t)).unwrap()
    }

    /// Direct average over all `k`-subsets.
    fn lhs_direct(f: &GroupAlgebraElement, p: f64, k: usize) -> f64 {
        let n = f.group().rank();
        let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
        subsets.iter().map(|s| norm_pp(&truncate(f, s).unwrap(), p).unwrap()).sum::<f64>() / subsets.len() as f64
    }

    #[test]
    fn single_walsh_example() {
        for n in 1..=5 {
            let r = naor_ratio(&walsh(n, &[1]), 2.0, n, &cube(n), DerivativeChoice::Walsh).unwrap();
            assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 5.0).abs() < 1e-12, "{r:?}");
            assert!((r.ratio - 0.2).abs() < 1e-12);
        }
        let r = naor_ratio(&walsh(3, &[1]), 2.0, 3, &cube(3), DerivativeChoice::Absorbent).unwrap();
        assert!((r.ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn subset_lattice_matches_direct_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cases = [
            (GroupDescriptor::hypercube(6), CocycleFamily::Z2mWord { rank: 6, m: 1 }, Ensemble::Gaussian),
            (GroupDescriptor::hypercube(7), CocycleFamily::Z2mWord { rank: 7, m: 1 }, Ensemble::Sparse { size: 5 }),
            (GroupDescriptor::cyclic_power(6, 3), CocycleFamily::Z2mWord { rank: 3, m: 3 }, Ensemble::Gaussian),
            (GroupDescriptor::Torus { rank: 2, bound: 2 }, CocycleFamily::ZnWord { rank: 2 }, Ensemble::Gaussian),
        ];
        for (group, family, ens) in cases {
            let c = LengthCocycle::build(family).unwrap();
            let f = sample_element(&group, ens, &mut rng).unwrap();
            for p in [2.0, 3.0, 4.0] {
                let terms = naor_terms(&f, p, &c, DerivativeChoice::Absorbent).unwrap();
                for k in 1..=group.rank() {
                    let direct = lhs_direct(&f, p, k);
                    assert!((terms.lhs(k) - direct).abs() <= 1e-10 * direct.max(1.0), "{group} p={p} k={k}");
                }
                assert_eq!(terms.lhs(group.rank()), terms.norm_pp);
            }
        }
    }

    #[test]
    fn hypergeometric_closure_at_p2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [3, 5, 8] {
            let f = sample_element(&GroupDescriptor::hypercube(n), Ensemble::Gaussian, &mut rng).unwrap();
            let terms = naor_terms(&f, 2.0, &cube(n), DerivativeChoice::Walsh).unwrap();
            for k in 1..=n {
                // Pr(A in S) = prod_{i < |A|} (k - i) / (n - i)
                let oracle: f64 = f
                    .iter()
                    .map(|(g, c)| {
                        let size = g.as_tuple().unwrap().iter().filter(|&&x| x != 0).count();
                        let prob: f64 = (0..size).map(|i| (k as f64 - i as f64).max(0.0) / (n - i) as f64).product();
                        c.norm_sqr() * prob
                    })
                    .sum();
                assert!((terms.lhs(k) - oracle).abs() < 1e-10, "n={n} k={k}");
                assert!(terms.ratio(k) <= 1.0 + 1e-12);
                if k > 1 {
                    assert!(terms.lhs(k) >= terms.lhs(k - 1) - 1e-12);
                }
            }
        }
    }

    #[test]
    fn adjoint_terms_agree_on_abelian_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cases = [
            (GroupDescriptor::hypercube(4), CocycleFamily::Z2mWord { rank: 4, m: 1 }),
            (GroupDescriptor::cyclic_power(4, 3), CocycleFamily::Z2mWord { rank: 3, m: 2 }),
            (GroupDescriptor::Torus { rank: 2, bound: 2 }, CocycleFamily::Euclidean { rank: 2 }),
            (GroupDescriptor::Torus { rank: 2, bound: 2 }, CocycleFamily::ZnWord { rank: 2 }),
        ];
        for (group, family) in cases {
            let c = LengthCocycle::build(family).unwrap();
            let f = sample_element(&group, Ensemble::Gaussian, &mut rng).unwrap();
            for choice in [DerivativeChoice::Absorbent, DerivativeChoice::Gradient] {
                let t = naor_terms(&f, 4.0, &c, choice).unwrap();
                assert!((t.derivative_sum() - t.adjoint_sum()).abs() <= 1e-9 * t.derivative_sum().max(1.0));
            }
        }
    }

    #[test]
    fn euclidean_derivative_on_the_torus() {
        let g = GroupDescriptor::Torus { rank: 1, bound: 1 };
        let f = GroupAlgebraElement::from_tuples(g, &[(&[1], Complex64::new(1.0, 0.0))]).unwrap();
        let c = LengthCocycle::build(CocycleFamily::Euclidean { rank: 1 }).unwrap();
        let t = naor_terms(&f, 4.0, &c, DerivativeChoice::Euclidean).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((t.derivative_sum() - two_pi.powi(4)).abs() < 1e-8);
        let grad = naor_terms(&f, 4.0, &c, DerivativeChoice::Gradient).unwrap();
        assert!((grad.derivative_sum() - t.derivative_sum()).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = cube(3);
        let f = walsh(3, &[1]);
        assert!(naor_ratio(&f, 2.0, 4, &c, DerivativeChoice::Walsh).is_err());
        assert!(naor_ratio(&f, 2.0, 0, &c, DerivativeChoice::Walsh).is_err());
        let g = walsh(3, &[]);
        assert!(matches!(naor_ratio(&g, 2.0, 1, &c, DerivativeChoice::Walsh), Err(Error::NotMeanZero(_))));
        let z4 = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 2 }).unwrap();
        let h = GroupAlgebraElement::from_tuples(GroupDescriptor::cyclic_power(4, 2), &[(&[1, 0], Complex64::new(1.0, 0.0))])
            .unwrap();
        assert!(naor_ratio(&h, 2.0, 1, &z4, DerivativeChoice::Walsh).is_err());
        assert!(naor_ratio(&h, 2.0, 1, &z4, DerivativeChoice::Euclidean).is_err());
        let free = LengthCocycle::build(CocycleFamily::Free { rank: 2 }).unwrap();
        let w = GroupAlgebraElement::from_words(GroupDescriptor::Free { rank: 2 }, &[(&[(1, 1)], Complex64::new(1.0, 0.0))])
            .unwrap();
        assert!(naor_ratio(&w, 2.0, 1, &free, DerivativeChoice::Absorbent).is_err());
    }
}
