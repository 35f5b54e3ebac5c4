//! Evaluation of finite abelian group algebra elements on the dual group.
//!
//! Dual points are indexed lexicographically over `(x_1, ..., x_n)` with
//! `x_j in 0..m_j` and the last coordinate varying fastest. Characters are
//! `chi_g(x) = prod_j exp(2 pi i g_j x_j / m_j)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::GroupAlgebraElement;
use crate::error::{Error, Result};
use crate::group::{lex_points, GroupDescriptor, GroupElement};

/// Values of an element at every point of the dual group.
#[derive(Clone, Debug, PartialEq)]
pub struct DualEvaluation {
    group: GroupDescriptor,
    values: Vec<Complex64>,
}

impl DualEvaluation {
    pub fn new(group: GroupDescriptor, values: Vec<Complex64>) -> Result<Self> {
        let order = group
            .order()
            .ok_or_else(|| Error::Unsupported { op: "dual evaluation", kind: group.to_string() })?;
        if values.len() != order {
            return Err(Error::InvalidParameter(format!(
                "expected {order} dual values for {group}, got {}",
                values.len()
            )));
        }
        Ok(DualEvaluation { group, values })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// `exp(sign * 2 pi i k / m)`, exact at quarter turns.
fn unit_root(k: usize, m: usize, sign: f64) -> Complex64 {
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        let quarter = 4 * k / m;
        let (re, im) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][quarter];
        return Complex64::new(re, sign * im);
    }
    Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / m as f64)
}

/// In-place separable DFT over `prod_j Z_{m_j}` (row-major layout).
/// `sign = +1` synthesizes values from coefficients, `-1` analyses.
pub(crate) fn transform(data: &mut [Complex64], moduli: &[u32], sign: f64) {
    let mut stride = 1usize;
    let mut buf = Vec::new();
    for &m in moduli.iter().rev() {
        let m = m as usize;
        let roots: Vec<Complex64> = (0..m).map(|k| unit_root(k, m, sign)).collect();
        buf.resize(m, Complex64::default());
        let block = stride * m;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (x, b) in buf.iter_mut().enumerate() {
                    *b = data[base + off + x * stride];
                }
                if m == 2 {
                    data[base + off] = buf[0] + buf[1];
                    data[base + off + stride] = buf[0] - buf[1];
                    continue;
                }
                for y in 0..m {
                    let mut acc = Complex64::default();
                    for (x, b) in buf.iter().enumerate() {
                        acc += b * roots[(x * y) % m];
                    }
                    data[base + off + y * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

/// Row-major index of a tuple.
pub(crate) fn flat_index(g: &[i64], moduli: &[u32]) -> usize {
    g.iter().zip(moduli).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
}

/// Dense values on the dual of `prod_j Z_{moduli[j]}` of the element with
/// the given coefficients; tuples must already be reduced.
pub(crate) fn synthesize<'a>(
    coeffs: impl IntoIterator<Item = (&'a [i64], Complex64)>,
    moduli: &[u32],
) -> Vec<Complex64> {
    let size: usize = moduli.iter().map(|&m| m as usize).product();
    let mut data = vec![Complex64::default(); size];
    for (g, c) in coeffs {
        data[flat_index(g, moduli)] += c;
    }
    transform(&mut data, moduli, 1.0);
    data
}

/// Values of `f` on the dual, restricted to the coordinates where the
/// support of `f` is nontrivial. The normalized distribution of `|values|`
/// is the same as on the full dual group, which is what `L_p` norms need.
pub(crate) fn active_values(f: &GroupAlgebraElement) -> Result<Vec<Complex64>> {
    let moduli = f
        .group()
        .moduli()
        .ok_or_else(|| Error::Unsupported { op: "dual evaluation", kind: f.group().to_string() })?;
    let active: Vec<usize> = (0..moduli.len())
        .filter(|&j| f.support().any(|g| g.as_tuple().is_some_and(|t| t[j] != 0)))
        .collect();
    let sub_moduli: Vec<u32> = active.iter().map(|&j| moduli[j]).collect();
    let projected: Vec<(Vec<i64>, Complex64)> = f
        .iter()
        .map(|(g, c)| {
            let t = g.as_tuple().expect("abelian element");
            (active.iter().map(|&j| t[j]).collect(), *c)
        })
        .collect();
    Ok(synthesize(projected.iter().map(|(g, c)| (g.as_slice(), *c)), &sub_moduli))
}

/// `values[x] = sum_g f(g) chi_g(x)`.
pub fn evaluate_on_dual(f: &GroupAlgebraElement) -> Result<DualEvaluation> {
    let moduli = f
        .group()
        .moduli()
        .ok_or_else(|| Error::Unsupported { op: "evaluate_on_dual", kind: f.group().to_string() })?;
    let values = synthesize(f.iter().map(|(g, c)| (g.as_tuple().expect("abelian element"), *c)), moduli);
    Ok(DualEvaluation { group: f.group().clone(), values })
}

/// Inverse of [`evaluate_on_dual`]: `f(g) = |G|^{-1} sum_x values[x] conj(chi_g(x))`.
pub fn fourier_coefficients(v: &DualEvaluation) -> GroupAlgebraElement {
    let moduli = v.group.moduli().expect("validated at construction");
    let mut data = v.values.clone();
    transform(&mut data, moduli, -1.0);
    let scale = 1.0 / data.len() as f64;
    let points = lex_points(moduli);
    GroupAlgebraElement::from_parts(
        v.group.clone(),
        points.into_iter().zip(data).map(|(g, c)| (GroupElement::Tuple(g), c * scale)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::convolve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Character sum straight from the definition.
    fn brute_force(f: &GroupAlgebraElement) -> Vec<Complex64> {
        let moduli = f.group().moduli().unwrap();
        lex_points(moduli)
            .iter()
            .map(|x| {
                f.iter()
                    .map(|(g, coef)| {
                        let t = g.as_tuple().unwrap();
                        let phase: f64 = t
                            .iter()
                            .zip(x)
                            .zip(moduli)
                            .map(|((&gj, &xj), &m)| 2.0 * PI * (gj * xj) as f64 / m as f64)
                            .sum();
                        coef * Complex64::from_polar(1.0, phase)
                    })
                    .sum()
            })
            .collect()
    }

    fn random_element(group: &GroupDescriptor, rng: &mut ChaCha8Rng) -> GroupAlgebraElement {
        let elems = group.elements().unwrap();
        GroupAlgebraElement::from_coeffs(
            group.clone(),
            elems.into_iter().map(|g| (g, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))),
        )
        .unwrap()
    }

    #[test]
    fn identity_character_is_constant() {
        let g = GroupDescriptor::FiniteAbelian { moduli: vec![3, 4] };
        let v = evaluate_on_dual(&GroupAlgebraElement::unit(g)).unwrap();
        assert!(v.values().iter().all(|&x| x == c(1.0, 0.0)));
    }

    #[test]
    fn walsh_character_values() {
        let g = GroupDescriptor::hypercube(2);
        let w1 = GroupAlgebraElement::from_tuples(g.clone(), &[(&[1, 0], c(1.0, 0.0))]).unwrap();
        let v = evaluate_on_dual(&w1).unwrap();
        assert_eq!(v.values(), &[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)]);
        for (a, b) in v.values().iter().zip(brute_force(&w1)) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(fourier_coefficients(&v), w1);
    }

    #[test]
    fn conjugate_characters_on_z4() {
        let g = GroupDescriptor::cyclic_power(4, 1);
        let f = GroupAlgebraElement::from_tuples(g, &[(&[1], c(1.0, 0.0)), (&[3], c(1.0, 0.0))]).unwrap();
        let v = evaluate_on_dual(&f).unwrap();
        let expected = [2.0, 0.0, -2.0, 0.0];
        for (x, e) in v.values().iter().zip(expected) {
            assert!((x - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_array_has_single_coefficient() {
        let g = GroupDescriptor::FiniteAbelian { moduli: vec![3, 2] };
        let v = DualEvaluation::new(g.clone(), vec![c(2.5, -1.0); 6]).unwrap();
        let f = fourier_coefficients(&v);
        assert_eq!(f.len(), 1);
        assert!((f.coeff(&g.identity()) - c(2.5, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn fast_transform_matches_character_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for moduli in [vec![3, 4], vec![2, 2, 2], vec![5], vec![6, 2, 3]] {
            let g = GroupDescriptor::FiniteAbelian { moduli };
            let f = random_element(&g, &mut rng);
            let fast = evaluate_on_dual(&f).unwrap();
            for (a, b) in fast.values().iter().zip(brute_force(&f)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn round_trip_and_plancherel() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = GroupDescriptor::FiniteAbelian { moduli: vec![3, 4] };
        for _ in 0..100 {
            let f = random_element(&g, &mut rng);
            let v = evaluate_on_dual(&f).unwrap();
            let back = fourier_coefficients(&v);
            assert!(back.max_abs_diff(&f) < crate::tolerance::ROUND_TRIP);
            let mean_sq: f64 = v.values().iter().map(|x| x.norm_sqr()).sum::<f64>() / 12.0;
            assert!((mean_sq - f.coeff_l2_sq()).abs() < 1e-10);
        }
    }

    #[test]
    fn convolution_is_pointwise_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GroupDescriptor::FiniteAbelian { moduli: vec![3, 2, 4] };
        for _ in 0..10 {
            let f = random_element(&g, &mut rng);
            let h = random_element(&g, &mut rng);
            let lhs = evaluate_on_dual(&convolve(&f, &h).unwrap()).unwrap();
            let vf = evaluate_on_dual(&f).unwrap();
            let vh = evaluate_on_dual(&h).unwrap();
            for ((a, b), c) in lhs.values().iter().zip(vf.values()).zip(vh.values()) {
                assert!((a - b * c).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn unsupported_groups() {
        let f = GroupAlgebraElement::unit(GroupDescriptor::Free { rank: 2 });
        assert!(matches!(evaluate_on_dual(&f), Err(Error::Unsupported { .. })));
        assert!(DualEvaluation::new(GroupDescriptor::hypercube(2), vec![c(0.0, 0.0); 3]).is_err());
    }
}
