use std::f64::consts::PI;

use itertools::Itertools;
use num_rational::Rational64;
use serde::Serialize;

use crate::cocycle::{BasisVectorId, CocycleFamily, LengthCocycle};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::operators::MultiplierOp;
use crate::tolerance::EXACT_F64;

/// One identity checked over a finite domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn exact(name: &str, cases: usize, failures: usize) -> Self {
        IdentityCheck { name: name.into(), cases, max_error: failures as f64, pass: failures == 0 }
    }

    fn approx(name: &str, cases: usize, max_error: f64) -> Self {
        IdentityCheck { name: name.into(), cases, max_error, pass: max_error <= EXACT_F64 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub family: CocycleFamily,
    pub max_len: u64,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl IdentityReport {
    /// Largest error over the approximate checks, failure count for exact ones.
    pub fn max_error(&self) -> f64 {
        self.checks.iter().map(|c| c.max_error).fold(0.0, f64::max)
    }
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).flat_map(move |k| (1..=n).combinations(k))
}

/// Multiplier identities on every element of `domain`: absorbency, Riesz
/// normalization, `-4 pi^2 Delta = sum_u d_u^2` and the commutation of
/// Riesz transforms with truncations; on free kinds also `H_eps^2 = id`,
/// `sum_j partial_j = id` and `E_S = E_S o P_{A_S}` on mean-zero elements.
pub fn operator_identities(c: &LengthCocycle, domain: &[GroupElement]) -> Result<Vec<IdentityCheck>> {
    let n = c.rank();
    let basis: Vec<BasisVectorId> = c.basis_for_support(domain)?.into_iter().collect();
    let derivatives: Vec<MultiplierOp> =
        basis.iter().map(|u| MultiplierOp::directional_derivative(c, u)).collect::<Result<_>>()?;
    let riesz: Vec<MultiplierOp> = basis.iter().map(|u| MultiplierOp::riesz_transform(c, u)).collect::<Result<_>>()?;
    let absorbent: Vec<MultiplierOp> = (1..=n).map(|j| MultiplierOp::absorbent_derivative(c, j)).collect::<Result<_>>()?;
    let nonzero: Vec<&GroupElement> = domain.iter().filter(|g| c.psi(g) != 0.0).collect();
    let mut checks = Vec::new();

    let mut err: f64 = 0.0;
    let mut cases = 0;
    for (u, d) in basis.iter().zip(&derivatives) {
        let composed = d.after(&absorbent[c.component(u) - 1]);
        for g in domain {
            err = err.max((composed.symbol(g) - d.symbol(g)).norm());
            cases += 1;
        }
    }
    checks.push(IdentityCheck::approx("absorbency", cases, err));

    let mut riesz_err: f64 = 0.0;
    let mut laplace_err: f64 = 0.0;
    let laplacian = MultiplierOp::laplacian_power(c, 1.0)?;
    for g in &nonzero {
        let mut riesz_sum = 0.0;
        let mut square_sum = num_complex::Complex64::default();
        for u in c.basis_for_element(g)? {
            riesz_sum += MultiplierOp::riesz_transform(c, &u)?.symbol(g).norm_sqr();
            square_sum += MultiplierOp::directional_derivative(c, &u)?.symbol(g).powi(2);
        }
        riesz_err = riesz_err.max((riesz_sum - 4.0 * PI * PI).abs());
        let target = -4.0 * PI * PI * laplacian.symbol(g);
        laplace_err = laplace_err.max((square_sum - target).norm() / target.norm().max(1.0));
    }
    checks.push(IdentityCheck::approx("riesz-normalization", nonzero.len(), riesz_err));
    checks.push(IdentityCheck::approx("laplacian-square-sum", nonzero.len(), laplace_err));

    let mut err: f64 = 0.0;
    let mut cases = 0;
    for s in nonempty_subsets(n) {
        let e = MultiplierOp::truncation(&s)?;
        for (u, r) in basis.iter().zip(&riesz) {
            let lhs = r.after(&e);
            let inside = s.contains(&c.component(u));
            let rhs = e.after(r);
            for g in domain {
                let expected = if inside { rhs.symbol(g) } else { Default::default() };
                err = err.max((lhs.symbol(g) - expected).norm());
                cases += 1;
            }
        }
    }
    checks.push(IdentityCheck::approx("riesz-truncation-commutation", cases, err));

    if c.group().is_free_kind() {
        let mut err: f64 = 0.0;
        for g in &nonzero {
            let total: num_complex::Complex64 = absorbent.iter().map(|d| d.symbol(g)).sum();
            err = err.max((total - 1.0).norm());
        }
        checks.push(IdentityCheck::approx("absorbent-partition", nonzero.len(), err));

        let mut err: f64 = 0.0;
        let mut cases = 0;
        for mask in 0..1u32 << n {
            let signs: Vec<i8> = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            let h = MultiplierOp::free_hilbert_transform(&signs)?;
            let hh = h.after(&h);
            for g in &nonzero {
                err = err.max((hh.symbol(g) - 1.0).norm());
                cases += 1;
            }
        }
        checks.push(IdentityCheck::approx("hilbert-square", cases, err));

        let mut err: f64 = 0.0;
        let mut cases = 0;
        for s in nonempty_subsets(n) {
            let e = MultiplierOp::truncation(&s)?;
            let composed = e.after(&MultiplierOp::project_as(&s)?);
            for g in &nonzero {
                err = err.max((composed.symbol(g) - e.symbol(g)).norm());
                cases += 1;
            }
        }
        checks.push(IdentityCheck::approx("truncation-inside-first-letter-projection", cases, err));
    }
    Ok(checks)
}

/// Gromov forms, basis certification and operator identities on the words
/// of length at most `max_len` of a free group or free product.
pub fn free_identities(family: CocycleFamily, max_len: u64) -> Result<IdentityReport> {
    if !matches!(family, CocycleFamily::Free { .. } | CocycleFamily::FreeProduct { .. }) {
        return Err(Error::InvalidParameter(format!("free identities need a free family, got {family}")));
    }
    let c = LengthCocycle::build(family.clone())?;
    let kind = c.group().word_kind().unwrap();
    let words = kind.words_up_to(max_len);
    let domain: Vec<GroupElement> = words.iter().cloned().map(GroupElement::Word).collect();
    let mut checks = Vec::new();

    let mut failures = 0;
    for g in &domain {
        for h in &domain {
            if c.gromov_form_exact(g, h)? != c.gromov_defining_exact(g, h)? {
                failures += 1;
            }
        }
    }
    checks.push(IdentityCheck::exact("gromov-closed-form", domain.len().pow(2), failures));

    let basis = c.basis_slice(max_len)?;
    let gram = c.gram_exact(&basis)?;
    let failures = gram
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i == j, *x)))
        .filter(|&(diag, x)| x != Rational64::from_integer(diag as i64))
        .count();
    checks.push(IdentityCheck::exact("basis-gram-identity", basis.len().pow(2), failures));

    let mut err: f64 = 0.0;
    for g in &domain {
        err = err.max((c.completeness_sum(g)? - c.psi(g)).abs());
    }
    checks.push(IdentityCheck::approx("completeness", domain.len(), err));

    let mut err: f64 = 0.0;
    let mut cases = 0;
    for u in &basis {
        for g in &domain {
            err = err.max((c.pairing(g, u)? - c.pairing_via_gromov(g, u)?).abs());
            cases += 1;
        }
    }
    checks.push(IdentityCheck::approx("pairing-via-gromov-form", cases, err));

    if let CocycleFamily::FreeProduct { m, .. } = family {
        let m = m as i64;
        let mut failures = 0;
        let mut cases = 0;
        for w in &words {
            let Some((gen, l)) = w.last_block() else { continue };
            if l == m {
                continue;
            }
            let shifted = kind.mul(w, &kind.generator_power(gen, m)?);
            cases += 1;
            if c.form_exact(&c.word_edge(w)?, &c.word_edge(&shifted)?)? != Rational64::from_integer(-1) {
                failures += 1;
            }
        }
        checks.push(IdentityCheck::exact("sign-relation", cases, failures));
    }

    checks.extend(operator_identities(&c, &domain)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(IdentityReport { family, max_len, checks, pass })
}
