//! Fourier multipliers and truncations: derivatives, gradients, Laplacian
//! powers, the heat semigroup, Riesz transforms, subgroup truncations and
//! the free Hilbert transforms.
//!
//! Directional derivatives carry the factor `2 pi i`; absorbent derivatives
//! are 0/1 projections.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{adjoint, GroupAlgebraElement};
use crate::cocycle::{BasisVectorId, CocycleFamily, LengthCocycle};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};

pub type Symbol = Arc<dyn Fn(&GroupElement) -> Complex64 + Send + Sync>;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn indicator(b: bool) -> Complex64 {
    real(if b { 1.0 } else { 0.0 })
}

#[derive(Clone, Debug)]
enum Requirement {
    MeanZero,
    Cocycle(Arc<LengthCocycle>),
    Hypercube,
    WordGroup,
    /// Every index of a subset must be a valid coordinate or generator.
    MaxIndex(usize),
}

impl Requirement {
    fn check(&self, f: &GroupAlgebraElement, op: &str) -> Result<()> {
        let group = f.group();
        match self {
            Requirement::MeanZero => f.require_mean_zero(),
            Requirement::Cocycle(c) => c.check_group(group),
            Requirement::Hypercube => match group {
                GroupDescriptor::FiniteAbelian { moduli } if moduli.iter().all(|&m| m == 2) => Ok(()),
                _ => Err(Error::GroupMismatch(format!("{op} needs a hypercube"), group.to_string())),
            },
            Requirement::WordGroup => {
                if group.is_free_kind() {
                    Ok(())
                } else {
                    Err(Error::GroupMismatch(format!("{op} needs a free group or free product"), group.to_string()))
                }
            }
            Requirement::MaxIndex(k) => {
                if *k <= group.rank() {
                    Ok(())
                } else {
                    Err(Error::IndexOutOfRange { index: *k, rank: group.rank() })
                }
            }
        }
    }
}

/// A Fourier multiplier `lambda(g) -> symbol(g) lambda(g)`.
#[derive(Clone)]
pub struct MultiplierOp {
    name: String,
    symbol: Symbol,
    requires: Vec<Requirement>,
}

impl fmt::Debug for MultiplierOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierOp").field("name", &self.name).finish()
    }
}

impl MultiplierOp {
    pub fn new(name: impl Into<String>, symbol: impl Fn(&GroupElement) -> Complex64 + Send + Sync + 'static) -> Self {
        MultiplierOp { name: name.into(), symbol: Arc::new(symbol), requires: Vec::new() }
    }

    fn with(mut self, r: Requirement) -> Self {
        self.requires.push(r);
        self
    }

    fn on(self, c: &LengthCocycle) -> Self {
        self.with(Requirement::Cocycle(Arc::new(c.clone())))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbol(&self, g: &GroupElement) -> Complex64 {
        (self.symbol)(g)
    }

    pub fn apply(&self, f: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        for r in &self.requires {
            r.check(f, &self.name)?;
        }
        Ok(f.map(|g, c| c * (self.symbol)(g)))
    }

    /// `self` after `first`; the symbols multiply.
    pub fn after(&self, first: &MultiplierOp) -> MultiplierOp {
        let (a, b) = (self.symbol.clone(), first.symbol.clone());
        let mut requires = first.requires.clone();
        requires.extend(self.requires.iter().cloned());
        MultiplierOp {
            name: format!("{} . {}", self.name, first.name),
            symbol: Arc::new(move |g| a(g) * b(g)),
            requires,
        }
    }

    /// `lambda(g) -> 2 pi i <beta(g), u> lambda(g)`.
    pub fn directional_derivative(c: &LengthCocycle, u: &BasisVectorId) -> Result<Self> {
        c.validate_basis(u)?;
        let (cc, uu) = (c.clone(), u.clone());
        Ok(MultiplierOp::new(format!("d[{u}]"), move |g| TWO_PI_I * cc.pairing(g, &uu).unwrap_or(0.0)).on(c))
    }

    /// Distinguished derivative `partial_j`: `delta_{g_j != 0}` on the
    /// abelian families, `delta_{first letter is g_j^{+-k}}` on words.
    pub fn absorbent_derivative(c: &LengthCocycle, j: usize) -> Result<Self> {
        if !c.has_distinguished_derivatives() {
            return Err(c.unsupported("absorbent derivative"));
        }
        check_index(j, c.rank())?;
        let op = if c.group().is_free_kind() {
            MultiplierOp::new(format!("absorbent[{j}]"), move |g| {
                indicator(g.as_word().and_then(|w| w.first_generator()) == Some(j))
            })
        } else {
            MultiplierOp::new(format!("absorbent[{j}]"), move |g| {
                indicator(g.as_tuple().is_some_and(|t| t[j - 1] != 0))
            })
        };
        Ok(op.on(c))
    }

    /// `epsilon -> f(epsilon) - f(epsilon - 2 epsilon_j e_j)` on `Omega_n`:
    /// the multiplier `2 delta_{j in A}` on Walsh functions.
    pub fn walsh_derivative(j: usize) -> Self {
        MultiplierOp::new(format!("walsh[{j}]"), move |g| {
            real(if g.as_tuple().and_then(|t| t.get(j - 1)).is_some_and(|&x| x != 0) { 2.0 } else { 0.0 })
        })
        .with(Requirement::Hypercube)
        .with(Requirement::MaxIndex(j))
    }

    /// `Delta^gamma` with `0^gamma = 0` for `gamma != 0`. Negative powers
    /// require mean-zero input.
    pub fn laplacian_power(c: &LengthCocycle, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("laplacian power {gamma}")));
        }
        let cc = c.clone();
        let op = MultiplierOp::new(format!("laplacian^{gamma}"), move |g| {
            let v = cc.psi(g);
            if v == 0.0 {
                indicator(gamma == 0.0)
            } else {
                real(v.powf(gamma))
            }
        })
        .on(c);
        Ok(if gamma < 0.0 { op.with(Requirement::MeanZero) } else { op })
    }

    /// `S_t: lambda(g) -> exp(-t psi(g)) lambda(g)`.
    pub fn heat_semigroup(c: &LengthCocycle, t: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("heat semigroup time {t}")));
        }
        let cc = c.clone();
        Ok(MultiplierOp::new(format!("heat[{t}]"), move |g| real((-t * cc.psi(g)).exp())).on(c))
    }

    /// `R_u = partial_u Delta^{-1/2}` on mean-zero elements.
    pub fn riesz_transform(c: &LengthCocycle, u: &BasisVectorId) -> Result<Self> {
        c.validate_basis(u)?;
        let (cc, uu) = (c.clone(), u.clone());
        Ok(MultiplierOp::new(format!("riesz[{u}]"), move |g| {
            let v = cc.psi(g);
            if v == 0.0 {
                return Complex64::default();
            }
            TWO_PI_I * cc.pairing(g, &uu).unwrap_or(0.0) / v.sqrt()
        })
        .on(c)
        .with(Requirement::MeanZero))
    }

    /// Truncation onto the subgroup `B_S` (coordinates or generators in `S`).
    pub fn truncation(subset: &[usize]) -> Result<Self> {
        let subset = normalize_subset(subset)?;
        let max = subset.last().copied().unwrap_or(0);
        Ok(MultiplierOp::new(format!("truncate{subset:?}"), move |g| {
            indicator(match g {
                GroupElement::Tuple(t) => t.iter().enumerate().all(|(j, &x)| x == 0 || subset.contains(&(j + 1))),
                GroupElement::Word(w) => w.blocks().iter().all(|(gen, _)| subset.contains(gen)),
            })
        })
        .with(Requirement::MaxIndex(max)))
    }

    /// `h = sum_{j in S} partial_j f`: words whose first letter is in `S`.
    pub fn project_as(subset: &[usize]) -> Result<Self> {
        let subset = normalize_subset(subset)?;
        let max = subset.last().copied().unwrap_or(0);
        Ok(MultiplierOp::new(format!("A{subset:?}"), move |g| {
            indicator(g.as_word().and_then(|w| w.first_generator()).is_some_and(|j| subset.contains(&j)))
        })
        .with(Requirement::WordGroup)
        .with(Requirement::MaxIndex(max))
        .with(Requirement::MeanZero))
    }

    /// `H_epsilon = sum_j epsilon_j partial_j` on mean-zero words.
    pub fn free_hilbert_transform(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidParameter(format!("signs must be +-1, got {signs:?}")));
        }
        let signs = signs.to_vec();
        let n = signs.len();
        Ok(MultiplierOp::new(format!("hilbert{signs:?}"), move |g| {
            match g.as_word().and_then(|w| w.first_generator()) {
                Some(j) => real(signs[j - 1] as f64),
                None => Complex64::default(),
            }
        })
        .with(Requirement::WordGroup)
        .with(Requirement::MaxIndex(n))
        .with(Requirement::MeanZero))
    }
}

fn check_index(j: usize, rank: usize) -> Result<()> {
    if j >= 1 && j <= rank {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: j, rank })
    }
}

fn normalize_subset(subset: &[usize]) -> Result<Vec<usize>> {
    if subset.contains(&0) {
        return Err(Error::IndexOutOfRange { index: 0, rank: 0 });
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

fn check_free_signs(f: &GroupAlgebraElement, signs: &[i8]) -> Result<()> {
    if signs.len() != f.group().rank() {
        return Err(Error::InvalidParameter(format!(
            "expected {} signs, got {}",
            f.group().rank(),
            signs.len()
        )));
    }
    Ok(())
}

/// The nonzero components `partial_u f` of a gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientVector {
    pub components: Vec<(BasisVectorId, GroupAlgebraElement)>,
}

impl GradientVector {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn elements(&self) -> Vec<GroupAlgebraElement> {
        self.components.iter().map(|(_, f)| f.clone()).collect()
    }
}

pub fn directional_derivative(
    f: &GroupAlgebraElement,
    u: &BasisVectorId,
    c: &LengthCocycle,
) -> Result<GroupAlgebraElement> {
    MultiplierOp::directional_derivative(c, u)?.apply(f)
}

/// `D_j f`: the derivatives of `f` along the basis vectors of `H_j`.
pub fn gradient(f: &GroupAlgebraElement, j: usize, c: &LengthCocycle) -> Result<GradientVector> {
    check_index(j, c.rank())?;
    gradient_with(f, c, |u| c.component(u) == j)
}

/// Gradient over an arbitrary selection of basis vectors, for splittings
/// of the cocycle space other than `H = (+)_j H_j`.
pub fn gradient_with(
    f: &GroupAlgebraElement,
    c: &LengthCocycle,
    select: impl Fn(&BasisVectorId) -> bool,
) -> Result<GradientVector> {
    c.check_group(f.group())?;
    let mut components = Vec::new();
    for u in c.basis_for_support(f.support())? {
        if !select(&u) {
            continue;
        }
        let d = directional_derivative(f, &u, c)?;
        if !d.is_zero() {
            components.push((u, d));
        }
    }
    Ok(GradientVector { components })
}

pub fn absorbent_derivative(f: &GroupAlgebraElement, j: usize, c: &LengthCocycle) -> Result<GroupAlgebraElement> {
    MultiplierOp::absorbent_derivative(c, j)?.apply(f)
}

/// `partial_j` rebuilt from directional derivatives along basis vectors:
/// on `Z_{2m}^n` it is `(partial_{u_j(1)} + partial_{u_j(m)}) / 2 pi i -
/// delta_{g_j = m}`, on the free product the same with `u_{g_j}`,
/// `u_{g_j^m}` and the first block, on `F_n` `(partial_{u_{g_j}} +
/// partial_{u_{g_j^{-1}}}) / 2 pi i`.
pub fn absorbent_via_basis(f: &GroupAlgebraElement, j: usize, c: &LengthCocycle) -> Result<GroupAlgebraElement> {
    check_index(j, c.rank())?;
    let d = |u: BasisVectorId| directional_derivative(f, &u, c).map(|g| g.scale(TWO_PI_I.inv()));
    let single = |w: &[(usize, i64)]| crate::words::ReducedWord::try_from(w.to_vec());
    match c.family() {
        CocycleFamily::ZnWord { .. } => d(BasisVectorId::ZWord { j, l: 1 })?.add(&d(BasisVectorId::ZWord { j, l: -1 })?),
        CocycleFamily::Z2mWord { m, .. } => {
            let m = *m as i64;
            let sum = d(BasisVectorId::Z2mWord { j, l: 1 })?.add(&d(BasisVectorId::Z2mWord { j, l: m })?)?;
            sum.sub(&f.filter(|g| g.as_tuple().is_some_and(|t| t[j - 1] == m)))
        }
        CocycleFamily::Free { .. } => d(BasisVectorId::FreeWord { w: single(&[(j, 1)])? })?
            .add(&d(BasisVectorId::FreeWord { w: single(&[(j, -1)])? })?),
        CocycleFamily::FreeProduct { m, .. } => {
            let m = *m as i64;
            let sum = d(BasisVectorId::FreeProdWord { w: single(&[(j, 1)])? })?
                .add(&d(BasisVectorId::FreeProdWord { w: single(&[(j, m)])? })?)?;
            sum.sub(&f.filter(|g| g.as_word().and_then(|w| w.blocks().first().copied()) == Some((j, m))))
        }
        CocycleFamily::WeightedCube { alpha } => {
            let scale = 0.5 / alpha[j - 1].sqrt();
            Ok(d(BasisVectorId::WeightedCube { j })?.scale(real(scale)))
        }
        _ => Err(c.unsupported("absorbent derivative from the basis")),
    }
}

pub fn walsh_derivative(f: &GroupAlgebraElement, j: usize) -> Result<GroupAlgebraElement> {
    if j == 0 {
        return Err(Error::IndexOutOfRange { index: 0, rank: f.group().rank() });
    }
    MultiplierOp::walsh_derivative(j).apply(f)
}

pub fn laplacian_power(f: &GroupAlgebraElement, gamma: f64, c: &LengthCocycle) -> Result<GroupAlgebraElement> {
    MultiplierOp::laplacian_power(c, gamma)?.apply(f)
}

pub fn heat_semigroup(f: &GroupAlgebraElement, t: f64, c: &LengthCocycle) -> Result<GroupAlgebraElement> {
    MultiplierOp::heat_semigroup(c, t)?.apply(f)
}

pub fn riesz_transform(f: &GroupAlgebraElement, u: &BasisVectorId, c: &LengthCocycle) -> Result<GroupAlgebraElement> {
    MultiplierOp::riesz_transform(c, u)?.apply(f)
}

/// `E_{[n] \ S} f`: keep the coefficients supported in `B_S`.
pub fn truncate(f: &GroupAlgebraElement, subset: &[usize]) -> Result<GroupAlgebraElement> {
    MultiplierOp::truncation(subset)?.apply(f)
}

/// `(E_{[n] \ S} (f^*))^*`, i.e. the truncation onto `B_S^{-1}`.
pub fn adjoint_truncation(f: &GroupAlgebraElement, subset: &[usize]) -> Result<GroupAlgebraElement> {
    Ok(adjoint(&truncate(&adjoint(f), subset)?))
}

pub fn project_as(f: &GroupAlgebraElement, subset: &[usize]) -> Result<GroupAlgebraElement> {
    MultiplierOp::project_as(subset)?.apply(f)
}

pub fn free_hilbert_transform(f: &GroupAlgebraElement, signs: &[i8]) -> Result<GroupAlgebraElement> {
    check_free_signs(f, signs)?;
    MultiplierOp::free_hilbert_transform(signs)?.apply(f)
}

/// Conditional expectation onto `{g : g_j in {0, m}}` in `Z_{2m}^n`.
pub fn expectation_zero_m(f: &GroupAlgebraElement, j: usize, m: u32) -> Result<GroupAlgebraElement> {
    match f.group() {
        GroupDescriptor::FiniteAbelian { moduli } if moduli.iter().all(|&q| q == 2 * m) => {
            check_index(j, moduli.len())?;
            let m = m as i64;
            Ok(f.filter(|g| g.as_tuple().is_some_and(|t| t[j - 1] == 0 || t[j - 1] == m)))
        }
        other => Err(Error::GroupMismatch(format!("Z_{}^n", 2 * m), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::project_mean_zero;
    use crate::cocycle::random_sample;
    use crate::group::lex_points;
    use crate::words::WordKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> Complex64 {
        c(1.0, 0.0)
    }

    fn cocycle(f: CocycleFamily) -> LengthCocycle {
        LengthCocycle::build(f).unwrap()
    }

    fn torus(rank: usize, bound: u32) -> GroupDescriptor {
        GroupDescriptor::Torus { rank, bound }
    }

    fn words(group: GroupDescriptor, terms: &[(&[(usize, i64)], Complex64)]) -> GroupAlgebraElement {
        GroupAlgebraElement::from_words(group, terms).unwrap()
    }

    fn close(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> bool {
        a.max_abs_diff(b) < 1e-12
    }

    /// Random element supported on a small domain of the cocycle's group.
    fn random_element(cc: &LengthCocycle, rng: &mut ChaCha8Rng, mean_zero: bool) -> GroupAlgebraElement {
        let sample = random_sample(cc, 10, rng.random()).unwrap();
        let group = match cc.group() {
            GroupDescriptor::Torus { rank, .. } => torus(*rank, 3),
            g => g.clone(),
        };
        let f = GroupAlgebraElement::from_coeffs(
            group,
            sample.into_iter().map(|g| (g, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))),
        )
        .unwrap();
        if mean_zero {
            project_mean_zero(&f, cc).unwrap()
        } else {
            f
        }
    }

    fn families() -> Vec<LengthCocycle> {
        CocycleFamily::all_builtin(3).into_iter().map(cocycle).filter(|c| c.has_basis()).collect()
    }

    #[test]
    fn directional_derivative_examples() {
        let euc = cocycle(CocycleFamily::Euclidean { rank: 2 });
        let e1 = BasisVectorId::Euclidean { j: 1 };
        let unit = GroupAlgebraElement::unit(torus(2, 0));
        assert!(directional_derivative(&unit, &e1, &euc).unwrap().is_zero());
        let f = GroupAlgebraElement::from_tuples(torus(2, 4), &[(&[3, 4], one())]).unwrap();
        let d = directional_derivative(&f, &e1, &euc).unwrap();
        assert!(close(&d, &f.scale(c(0.0, 6.0 * PI))));

        let free = cocycle(CocycleFamily::Free { rank: 2 });
        let g = GroupDescriptor::Free { rank: 2 };
        let f = words(g.clone(), &[(&[(1, 1), (2, 1)], one()), (&[(2, 1)], one())]);
        let u = BasisVectorId::FreeWord { w: WordKind::Free { rank: 2 }.reduce(&[(1, 1)]).unwrap() };
        let d = directional_derivative(&f, &u, &free).unwrap();
        assert!(close(&d, &words(g, &[(&[(1, 1), (2, 1)], TWO_PI_I)])));
        assert!(matches!(directional_derivative(&f, &e1, &free), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn gradient_examples() {
        let zw = cocycle(CocycleFamily::ZnWord { rank: 2 });
        assert!(gradient(&GroupAlgebraElement::unit(torus(2, 0)), 1, &zw).unwrap().is_empty());
        let f = GroupAlgebraElement::from_tuples(torus(2, 2), &[(&[2, 0], one())]).unwrap();
        let grad = gradient(&f, 1, &zw).unwrap();
        let ids: Vec<_> = grad.components.iter().map(|(u, _)| u.clone()).collect();
        assert_eq!(ids, vec![BasisVectorId::ZWord { j: 1, l: 1 }, BasisVectorId::ZWord { j: 1, l: 2 }]);
        for (_, d) in &grad.components {
            assert!(close(d, &f.scale(TWO_PI_I)));
        }
        assert!(gradient(&f, 2, &zw).unwrap().is_empty());
        assert!(gradient(&f, 3, &zw).is_err());
    }

    #[test]
    fn absorbent_examples() {
        let cube = cocycle(CocycleFamily::Z2mWord { rank: 3, m: 1 });
        let g = GroupDescriptor::hypercube(3);
        let w = GroupAlgebraElement::from_tuples(g, &[(&[1, 0, 1], one())]).unwrap();
        assert_eq!(absorbent_derivative(&w, 1, &cube).unwrap(), w);
        assert!(absorbent_derivative(&w, 2, &cube).unwrap().is_zero());

        let free = cocycle(CocycleFamily::Free { rank: 2 });
        let f = words(GroupDescriptor::Free { rank: 2 }, &[(&[(1, -2), (2, 1)], one())]);
        assert_eq!(absorbent_derivative(&f, 1, &free).unwrap(), f);
        assert!(absorbent_derivative(&f, 2, &free).unwrap().is_zero());

        let z4 = cocycle(CocycleFamily::Z2mWord { rank: 2, m: 2 });
        let g = GroupDescriptor::cyclic_power(4, 2);
        for x in 0..4 {
            let f = GroupAlgebraElement::from_tuples(g.clone(), &[(&[x, 1], one())]).unwrap();
            let direct = absorbent_derivative(&f, 1, &z4).unwrap();
            assert!(close(&direct, &absorbent_via_basis(&f, 1, &z4).unwrap()));
            assert_eq!(direct.is_zero(), x == 0);
        }
        let odd = cocycle(CocycleFamily::OddTorus { rank: 1, m: 1 });
        let f = GroupAlgebraElement::unit(GroupDescriptor::cyclic_power(3, 1));
        assert!(matches!(absorbent_derivative(&f, 1, &odd), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn absorbent_decomposition_all_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for cc in families() {
            if matches!(cc.family(), CocycleFamily::Euclidean { .. }) {
                continue;
            }
            for _ in 0..5 {
                let f = random_element(&cc, &mut rng, false);
                for j in 1..=3 {
                    let direct = absorbent_derivative(&f, j, &cc).unwrap();
                    let via = absorbent_via_basis(&f, j, &cc).unwrap();
                    assert!(direct.max_abs_diff(&via) < 1e-12, "{} j={j}", cc.family());
                }
            }
        }
    }

    #[test]
    fn absorbency_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for cc in families() {
            for _ in 0..5 {
                let f = random_element(&cc, &mut rng, false);
                for j in 1..=3 {
                    let dj = absorbent_derivative(&f, j, &cc).unwrap();
                    assert_eq!(absorbent_derivative(&dj, j, &cc).unwrap(), dj);
                    for (u, du) in gradient(&f, j, &cc).unwrap().components {
                        let composed = directional_derivative(&dj, &u, &cc).unwrap();
                        assert!(close(&composed, &du), "{} u={u}", cc.family());
                    }
                }
            }
        }
    }

    #[test]
    fn walsh_examples() {
        let g = GroupDescriptor::hypercube(2);
        let w1 = GroupAlgebraElement::from_tuples(g.clone(), &[(&[1, 0], one())]).unwrap();
        assert_eq!(walsh_derivative(&w1, 1).unwrap(), w1.scale(real(2.0)));
        assert!(walsh_derivative(&w1, 2).unwrap().is_zero());
        assert!(walsh_derivative(&GroupAlgebraElement::unit(g.clone()), 1).unwrap().is_zero());
        assert!(walsh_derivative(&w1, 3).is_err());
        let z4 = GroupAlgebraElement::unit(GroupDescriptor::cyclic_power(4, 2));
        assert!(walsh_derivative(&z4, 1).is_err());

        // flip identity: f(eps) - f(eps with the j-th sign flipped)
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = GroupDescriptor::hypercube(3);
        let cube = cocycle(CocycleFamily::Z2mWord { rank: 3, m: 1 });
        let values: Vec<Complex64> = (0..8).map(|_| c(rng.random_range(-1.0..1.0), 0.0)).collect();
        let f = crate::dual::fourier_coefficients(&crate::dual::DualEvaluation::new(g.clone(), values.clone()).unwrap());
        for j in 1..=3 {
            let d = crate::dual::evaluate_on_dual(&walsh_derivative(&f, j).unwrap()).unwrap();
            for (idx, x) in lex_points(&[2, 2, 2]).iter().enumerate() {
                let mut y = x.clone();
                y[j - 1] = 1 - y[j - 1];
                let flipped = crate::dual::flat_index(&y, &[2, 2, 2]);
                assert!((d.values()[idx] - (values[idx] - values[flipped])).norm() < 1e-12);
            }
            let twice = absorbent_derivative(&f, j, &cube).unwrap().scale(real(2.0));
            assert!(close(&walsh_derivative(&f, j).unwrap(), &twice));
        }
    }

    #[test]
    fn laplacian_examples() {
        let euc = cocycle(CocycleFamily::Euclidean { rank: 2 });
        let f = GroupAlgebraElement::from_tuples(torus(2, 4), &[(&[3, 4], one())]).unwrap();
        assert!(close(&laplacian_power(&f, 1.0, &euc).unwrap(), &f.scale(real(25.0))));
        assert_eq!(laplacian_power(&f, 0.0, &euc).unwrap(), f);
        let with_mean = f.add(&GroupAlgebraElement::unit(torus(2, 0))).unwrap();
        assert!(matches!(laplacian_power(&with_mean, -0.5, &euc), Err(Error::NotMeanZero(_))));
        assert_eq!(laplacian_power(&with_mean, 1.0, &euc).unwrap().len(), 1);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for cc in CocycleFamily::all_builtin(2).into_iter().map(cocycle) {
            let f = random_element(&cc, &mut rng, true);
            let back = laplacian_power(&laplacian_power(&f, -0.5, &cc).unwrap(), 0.5, &cc).unwrap();
            assert!(close(&back, &f));
        }
    }

    #[test]
    fn heat_examples() {
        let zw = cocycle(CocycleFamily::ZnWord { rank: 1 });
        let f = GroupAlgebraElement::from_tuples(torus(1, 1), &[(&[1], one())]).unwrap();
        assert_eq!(heat_semigroup(&f, 0.0, &zw).unwrap(), f);
        assert!(close(&heat_semigroup(&f, 1.0, &zw).unwrap(), &f.scale(real((-1.0f64).exp()))));
        assert!(heat_semigroup(&f, -1.0, &zw).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for cc in CocycleFamily::all_builtin(2).into_iter().map(cocycle) {
            let f = random_element(&cc, &mut rng, false);
            let s1 = heat_semigroup(&heat_semigroup(&f, 1.0, &cc).unwrap(), 1.0, &cc).unwrap();
            assert!(close(&s1, &heat_semigroup(&f, 2.0, &cc).unwrap()));
            let s = heat_semigroup(&f, 0.3, &cc).unwrap();
            assert!(s.iter().all(|(g, x)| x.norm() <= f.coeff(g).norm()));
        }
    }

    #[test]
    fn riesz_examples() {
        let euc = cocycle(CocycleFamily::Euclidean { rank: 2 });
        let f = GroupAlgebraElement::from_tuples(torus(2, 4), &[(&[3, 4], one())]).unwrap();
        let r1 = riesz_transform(&f, &BasisVectorId::Euclidean { j: 1 }, &euc).unwrap();
        assert!(close(&r1, &f.scale(c(0.0, 6.0 * PI / 5.0))));
        let r2 = riesz_transform(&f, &BasisVectorId::Euclidean { j: 2 }, &euc).unwrap();
        assert!(close(&r2, &f.scale(c(0.0, 8.0 * PI / 5.0))));
        let unit = GroupAlgebraElement::unit(torus(2, 0));
        assert!(matches!(riesz_transform(&unit, &BasisVectorId::Euclidean { j: 1 }, &euc), Err(Error::NotMeanZero(_))));
    }

    #[test]
    fn riesz_normalization_and_laplacian_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for cc in families() {
            for g in random_sample(&cc, 12, rng.random()).unwrap() {
                let basis = cc.basis_for_element(&g).unwrap();
                let total: f64 = basis
                    .iter()
                    .map(|u| MultiplierOp::riesz_transform(&cc, u).unwrap().symbol(&g).norm_sqr())
                    .sum();
                if cc.psi(&g) == 0.0 {
                    assert_eq!(total, 0.0);
                } else {
                    assert!((total - 4.0 * PI * PI).abs() < 1e-10, "{} {g}", cc.family());
                }
                if cc.psi_exact(&g).is_some() {
                    let squares: i64 = basis.iter().map(|u| cc.pairing_exact(&g, u).unwrap().pow(2)).sum();
                    assert_eq!(num_rational::Rational64::from_integer(squares), cc.psi_exact(&g).unwrap());
                }
                let second: Complex64 = basis
                    .iter()
                    .map(|u| {
                        let d = MultiplierOp::directional_derivative(&cc, u).unwrap();
                        d.symbol(&g) * d.symbol(&g)
                    })
                    .sum();
                assert!((second - real(-4.0 * PI * PI * cc.psi(&g))).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let g = GroupDescriptor::hypercube(2);
        let f = GroupAlgebraElement::from_tuples(g.clone(), &[(&[1, 0], one()), (&[0, 1], one()), (&[1, 1], one())])
            .unwrap();
        assert_eq!(truncate(&f, &[1, 2]).unwrap(), f);
        let w1 = GroupAlgebraElement::from_tuples(g, &[(&[1, 0], one())]).unwrap();
        assert_eq!(truncate(&f, &[1]).unwrap(), w1);
        assert!(matches!(truncate(&f, &[3]), Err(Error::IndexOutOfRange { .. })));

        let fg = GroupDescriptor::Free { rank: 2 };
        let f = words(fg.clone(), &[(&[(1, 1)], one()), (&[(2, 1), (1, 1)], one())]);
        assert_eq!(truncate(&f, &[1]).unwrap(), words(fg, &[(&[(1, 1)], one())]));
    }

    #[test]
    fn truncation_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let subsets: [&[usize]; 5] = [&[], &[1], &[2, 3], &[1, 3], &[1, 2, 3]];
        for cc in CocycleFamily::all_builtin(3).into_iter().map(cocycle) {
            let f = random_element(&cc, &mut rng, false);
            for a in subsets {
                let ea = truncate(&f, a).unwrap();
                assert_eq!(truncate(&ea, a).unwrap(), ea);
                for b in subsets {
                    let both: Vec<usize> = a.iter().filter(|j| b.contains(j)).copied().collect();
                    assert_eq!(truncate(&ea, b).unwrap(), truncate(&f, &both).unwrap());
                }
                if cc.group().is_abelian() {
                    assert_eq!(adjoint_truncation(&f, a).unwrap(), ea);
                }
            }
        }
    }

    #[test]
    fn multipliers_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for cc in families() {
            let f = random_element(&cc, &mut rng, true);
            let basis = cc.basis_for_support(f.support()).unwrap();
            let mut ops = vec![
                MultiplierOp::laplacian_power(&cc, 0.7).unwrap(),
                MultiplierOp::laplacian_power(&cc, -0.5).unwrap(),
                MultiplierOp::heat_semigroup(&cc, 0.4).unwrap(),
            ];
            ops.extend(basis.iter().take(4).map(|u| MultiplierOp::riesz_transform(&cc, u).unwrap()));
            let truncations: Vec<_> = [vec![1], vec![2, 3], vec![1, 2, 3]]
                .iter()
                .map(|s| (s.clone(), MultiplierOp::truncation(s).unwrap()))
                .collect();
            for a in &ops {
                for b in &ops {
                    let ab = a.apply(&b.apply(&f).unwrap()).unwrap();
                    let ba = b.apply(&a.apply(&f).unwrap()).unwrap();
                    assert!(close(&ab, &ba), "{} {} {}", cc.family(), a.name(), b.name());
                    assert!(close(&ab, &a.after(b).apply(&f).unwrap()));
                }
            }
            for (s, e) in &truncations {
                for u in &basis {
                    let r = MultiplierOp::riesz_transform(&cc, u).unwrap();
                    let re = r.apply(&e.apply(&f).unwrap()).unwrap();
                    let er = e.apply(&r.apply(&f).unwrap()).unwrap();
                    if s.contains(&cc.component(u)) {
                        assert!(close(&re, &er));
                    } else {
                        assert!(re.is_zero(), "{} {u} {s:?}", cc.family());
                    }
                }
            }
        }
    }

    #[test]
    fn free_projections() {
        let fg = GroupDescriptor::Free { rank: 2 };
        let f = words(fg.clone(), &[(&[(2, 1), (1, 1)], one())]);
        assert_eq!(project_as(&f, &[2]).unwrap(), f);
        assert!(project_as(&f, &[1]).unwrap().is_zero());
        assert_eq!(project_as(&f, &[1, 2]).unwrap(), f);
        let with_mean = f.add(&GroupAlgebraElement::unit(fg.clone())).unwrap();
        assert!(matches!(project_as(&with_mean, &[1]), Err(Error::NotMeanZero(_))));

        let f = words(fg.clone(), &[(&[(1, 1)], one()), (&[(2, 1)], one())]);
        assert_eq!(free_hilbert_transform(&f, &[1, 1]).unwrap(), f);
        let expected = words(fg.clone(), &[(&[(1, 1)], one()), (&[(2, 1)], -one())]);
        assert_eq!(free_hilbert_transform(&f, &[1, -1]).unwrap(), expected);
        assert!(free_hilbert_transform(&f, &[1]).is_err());

        let f = words(fg.clone(), &[(&[(1, 1)], one())]);
        assert_eq!(adjoint_truncation(&f, &[1]).unwrap(), f);
        assert!(adjoint_truncation(&f, &[2]).unwrap().is_zero());
    }

    #[test]
    fn free_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for cc in [
            cocycle(CocycleFamily::Free { rank: 3 }),
            cocycle(CocycleFamily::FreeProduct { rank: 3, m: 2 }),
        ] {
            for _ in 0..10 {
                let f = random_element(&cc, &mut rng, true);
                let signs: Vec<i8> = (0..3).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
                let h = free_hilbert_transform(&f, &signs).unwrap();
                assert_eq!(free_hilbert_transform(&h, &signs).unwrap(), f);
                let mut sum = GroupAlgebraElement::zero(f.group().clone());
                for j in 1..=3 {
                    sum = sum.add(&absorbent_derivative(&f, j, &cc).unwrap()).unwrap();
                }
                assert!(close(&sum, &project_mean_zero(&f, &cc).unwrap()));
                for s in [vec![1], vec![1, 3]] {
                    let a = project_as(&f, &s).unwrap();
                    assert_eq!(truncate(&a, &s).unwrap(), truncate(&f, &s).unwrap());
                }
            }
        }
    }

    #[test]
    fn expectation_filter() {
        let g = GroupDescriptor::cyclic_power(4, 2);
        let f = GroupAlgebraElement::from_tuples(g, &[(&[2, 1], one()), (&[1, 1], one()), (&[0, 3], one())]).unwrap();
        let e = expectation_zero_m(&f, 1, 2).unwrap();
        assert_eq!(e.len(), 2);
        assert!(expectation_zero_m(&f, 1, 3).is_err());
    }
}
