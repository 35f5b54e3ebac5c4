//! `L_p` norms of group algebra elements, Schatten norms and square
//! functions.
//!
//! Abelian norms are computed on the dual group with the normalized Haar
//! measure. Matrix norms use the unnormalized trace.

mod matrix;

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::GroupAlgebraElement;
use crate::dual::{active_values, synthesize};
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;

pub use matrix::{psd_sqrt, MatrixOperand};
use matrix::{common_dim, psd_eigenvalues};

/// Largest torus grid evaluated by [`lp_norm_torus_grid`].
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Largest number of matrices for the exhaustive sign average.
pub const MAX_KHINTCHINE_TERMS: usize = 16;

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must be at least 1, got {p}")))
    }
}

fn free_kind_error(group: &GroupDescriptor) -> Error {
    Error::Unsupported {
        op: "L_p norm (free groups are covered by the combinatorial free-identities suite)",
        kind: group.to_string(),
    }
}

/// `((1/N) sum |v|^p)^{1/p}`; `p = inf` gives the max.
pub fn normalized_lp(values: impl IntoIterator<Item = f64>, p: f64) -> f64 {
    let mut count = 0usize;
    let mut acc = 0.0;
    for v in values {
        count += 1;
        acc = if p.is_infinite() { f64::max(acc, v.abs()) } else { acc + v.abs().powf(p) };
    }
    if p.is_infinite() || count == 0 {
        return acc;
    }
    (acc / count as f64).powf(1.0 / p)
}

/// `||f||_p` on a finite abelian group, evaluated on the dual.
pub fn lp_norm_abelian(f: &GroupAlgebraElement, p: f64) -> Result<f64> {
    check_p(p)?;
    match f.group() {
        GroupDescriptor::FiniteAbelian { .. } => {
            Ok(normalized_lp(active_values(f)?.iter().map(|z| z.norm()), p))
        }
        g if g.is_free_kind() => Err(free_kind_error(g)),
        g => Err(Error::Unsupported { op: "lp_norm_abelian", kind: g.to_string() }),
    }
}

/// `p / 2` if `p` is an even integer.
fn even_half(p: f64) -> Option<u32> {
    (p >= 2.0 && p.fract() == 0.0 && (p as u64).is_multiple_of(2) && p <= 64.0).then(|| (p / 2.0) as u32)
}

/// Coefficients of a torus polynomial on the box `[-bound, bound]^rank`
/// over a subset of its coordinates, lexicographic.
#[derive(Clone, Debug)]
struct TorusBox {
    rank: usize,
    bound: i64,
    data: Vec<Complex64>,
}

impl TorusBox {
    fn zeros(rank: usize, bound: i64) -> Self {
        let width = (2 * bound + 1) as usize;
        TorusBox { rank, bound, data: vec![Complex64::default(); width.pow(rank as u32)] }
    }

    fn width(&self) -> i64 {
        2 * self.bound + 1
    }

    fn index(&self, g: impl Iterator<Item = i64>) -> usize {
        g.fold(0i64, |acc, x| acc * self.width() + x + self.bound) as usize
    }

    fn coords(&self, mut idx: usize) -> Vec<i64> {
        let w = self.width() as usize;
        let mut out = vec![0; self.rank];
        for slot in out.iter_mut().rev() {
            *slot = (idx % w) as i64 - self.bound;
            idx /= w;
        }
        out
    }

    fn from_element(f: &GroupAlgebraElement, active: &[usize], bound: i64) -> Self {
        let mut b = TorusBox::zeros(active.len(), bound);
        for (g, c) in f.iter() {
            let t = g.as_tuple().expect("torus element");
            let idx = b.index(active.iter().map(|&j| t[j]));
            b.data[idx] += c;
        }
        b
    }

    fn unit(rank: usize) -> Self {
        TorusBox { rank, bound: 0, data: vec![Complex64::new(1.0, 0.0)] }
    }

    fn nonzero(&self) -> Vec<(Vec<i64>, Complex64)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::default())
            .map(|(i, c)| (self.coords(i), *c))
            .collect()
    }

    fn convolve(&self, other: &TorusBox) -> TorusBox {
        let mut out = TorusBox::zeros(self.rank, self.bound + other.bound);
        let rhs = other.nonzero();
        for (a, x) in self.nonzero() {
            for (b, y) in &rhs {
                let idx = out.index(a.iter().zip(b).map(|(u, v)| u + v));
                out.data[idx] += x * y;
            }
        }
        out
    }

    /// `f^*`: on the symmetric box, `-g` sits at the mirrored index.
    fn adjoint(&self) -> TorusBox {
        TorusBox { rank: self.rank, bound: self.bound, data: self.data.iter().rev().map(|c| c.conj()).collect() }
    }

    fn add(&mut self, other: &TorusBox) {
        debug_assert_eq!(self.bound, other.bound);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// `sum_g a(g) conj(b(g))` with `b` on a smaller or equal box.
    fn inner(&self, other: &TorusBox) -> Complex64 {
        other
            .data
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::default())
            .map(|(i, c)| self.data[self.index(other.coords(i).into_iter())] * c.conj())
            .sum()
    }
}

/// Mean of `h^k` for a real trigonometric polynomial `h`, by convolution:
/// `tau(h^a h^b) = sum_g h^a(g) conj(h^b(g))` with `a + b = k`.
fn mean_power(h: &TorusBox, k: u32) -> f64 {
    let power = |e: u32| {
        let mut acc = TorusBox::unit(h.rank);
        for _ in 0..e {
            acc = acc.convolve(h);
        }
        acc
    };
    let a = power(k.div_ceil(2));
    let b = power(k / 2);
    a.inner(&b).re.max(0.0)
}

/// `sum_j |f_j|^2 = sum_j f_j * f_j^*` as a coefficient box.
fn sum_of_squares(fs: &[&GroupAlgebraElement]) -> TorusBox {
    let (active, bound) = torus_active(fs);
    let mut h = TorusBox::zeros(active.len(), 2 * bound);
    for f in fs {
        let b = TorusBox::from_element(f, &active, bound);
        h.add(&b.convolve(&b.adjoint()));
    }
    h
}

fn require_torus(f: &GroupAlgebraElement, op: &'static str) -> Result<()> {
    match f.group() {
        GroupDescriptor::Torus { .. } => Ok(()),
        g if g.is_free_kind() => Err(free_kind_error(g)),
        g => Err(Error::Unsupported { op, kind: g.to_string() }),
    }
}

/// Exact `||f||_p` on `T^n` for even `p`: the coefficient at 0 of
/// `(f f^*)^{p/2}`.
pub fn lp_norm_torus_even(f: &GroupAlgebraElement, p: f64) -> Result<f64> {
    require_torus(f, "lp_norm_torus_even")?;
    let k = even_half(p).ok_or_else(|| {
        Error::InvalidParameter(format!("exact torus norm needs an even integer p, got {p}; use the grid method"))
    })?;
    Ok(mean_power(&sum_of_squares(&[f]), k).powf(1.0 / p))
}

/// Support coordinates that are not identically zero, and the largest
/// frequency along them.
fn torus_active(fs: &[&GroupAlgebraElement]) -> (Vec<usize>, i64) {
    let mut active = BTreeSet::new();
    let mut bound = 0;
    for f in fs {
        for g in f.support() {
            for (j, &x) in g.as_tuple().expect("torus element").iter().enumerate() {
                if x != 0 {
                    active.insert(j);
                    bound = bound.max(x.abs());
                }
            }
        }
    }
    (active.into_iter().collect(), bound)
}

/// Values of torus polynomials on the grid `(k / N)^n`, restricted to the
/// active coordinates.
fn torus_grid_values(fs: &[&GroupAlgebraElement], oversample: u32) -> Result<Vec<Vec<Complex64>>> {
    if oversample < 4 {
        return Err(Error::InvalidParameter(format!("oversample must be at least 4, got {oversample}")));
    }
    let declared = fs
        .iter()
        .map(|f| match f.group() {
            GroupDescriptor::Torus { bound, .. } => *bound as i64,
            _ => 0,
        })
        .max()
        .unwrap_or(0);
    let (active, actual) = torus_active(fs);
    let bound = declared.max(actual);
    let n = oversample as i64 * (2 * bound + 1);
    let points = (n as usize).checked_pow(active.len() as u32).filter(|&s| s <= MAX_GRID_POINTS);
    if points.is_none() {
        return Err(Error::InvalidParameter(format!(
            "torus grid {n}^{} exceeds {MAX_GRID_POINTS} points",
            active.len()
        )));
    }
    let moduli = vec![n as u32; active.len()];
    Ok(fs
        .iter()
        .map(|f| {
            let coeffs: Vec<(Vec<i64>, Complex64)> = f
                .iter()
                .map(|(g, c)| {
                    let t = g.as_tuple().unwrap();
                    (active.iter().map(|&j| t[j].rem_euclid(n)).collect(), *c)
                })
                .collect();
            synthesize(coeffs.iter().map(|(g, c)| (g.as_slice(), *c)), &moduli)
        })
        .collect())
}

/// Riemann sum of `|f|^p` on `(oversample (2M + 1))^n` points.
pub fn lp_norm_torus_grid(f: &GroupAlgebraElement, p: f64, oversample: u32) -> Result<f64> {
    check_p(p)?;
    require_torus(f, "lp_norm_torus_grid")?;
    let values = torus_grid_values(&[f], oversample)?;
    Ok(normalized_lp(values[0].iter().map(|z| z.norm()), p))
}

/// `||f||_p` for any abelian kind: dual evaluation on finite groups, exact
/// convolution on the torus for even `p`, an oversampled grid otherwise.
pub fn lp_norm(f: &GroupAlgebraElement, p: f64) -> Result<f64> {
    match f.group() {
        GroupDescriptor::FiniteAbelian { .. } => lp_norm_abelian(f, p),
        GroupDescriptor::Torus { .. } if even_half(p).is_some() => lp_norm_torus_even(f, p),
        GroupDescriptor::Torus { .. } => lp_norm_torus_grid(f, p, 4),
        g => Err(free_kind_error(g)),
    }
}

/// `(sum_j s_j^p)^{1/p}` over the singular values.
pub fn schatten_norm(x: &MatrixOperand, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(lp_sum(x.singular_values(), p))
}

fn lp_sum(values: impl IntoIterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return values.into_iter().fold(0.0, f64::max);
    }
    values.into_iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `(sum x_j^* x_j)^{1/2}`
    Column,
    /// `(sum x_j x_j^*)^{1/2}`
    Row,
}

/// One entry of a square function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Operand {
    Matrix(MatrixOperand),
    Element(GroupAlgebraElement),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SquareFunctionOperand {
    Abelian(Vec<GroupAlgebraElement>),
    Matrix { components: Vec<MatrixOperand>, side: Side },
}

impl SquareFunctionOperand {
    /// Groups a list of operands; all must be of one kind and shape.
    pub fn new(components: Vec<Operand>, side: Side) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Precondition("square function needs at least one component".into()));
        }
        let mut elements = Vec::new();
        let mut matrices = Vec::new();
        for c in components {
            match c {
                Operand::Element(f) => elements.push(f),
                Operand::Matrix(x) => matrices.push(x),
            }
        }
        match (elements.is_empty(), matrices.is_empty()) {
            (false, false) => Err(Error::InvalidParameter("mixed matrix and group algebra operands".into())),
            (true, _) => {
                common_dim(&matrices)?;
                Ok(SquareFunctionOperand::Matrix { components: matrices, side })
            }
            (_, true) => Self::abelian(elements),
        }
    }

    pub fn abelian(components: Vec<GroupAlgebraElement>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Precondition("no components".into()))?;
        for f in &components {
            let same = match (first.group(), f.group()) {
                (GroupDescriptor::Torus { rank: a, .. }, GroupDescriptor::Torus { rank: b, .. }) => a == b,
                (a, b) => a == b,
            };
            if !same {
                return Err(Error::GroupMismatch(first.group().to_string(), f.group().to_string()));
            }
        }
        Ok(SquareFunctionOperand::Abelian(components))
    }
}

/// `|| (sum_j |f_j|^2)^{1/2} ||_p` (abelian) or the Schatten norm of the
/// column/row square function (matrices).
pub fn square_function_norm(sf: &SquareFunctionOperand, p: f64) -> Result<f64> {
    check_p(p)?;
    match sf {
        SquareFunctionOperand::Matrix { components, side } => {
            let d = common_dim(components)?;
            let mut sum = nalgebra::DMatrix::<Complex64>::zeros(d, d);
            for x in components {
                let a = x.entries();
                sum += match side {
                    Side::Column => a.adjoint() * a,
                    Side::Row => a * a.adjoint(),
                };
            }
            let eig = psd_eigenvalues(&sum)?;
            Ok(lp_sum(eig.into_iter().map(f64::sqrt), p))
        }
        SquareFunctionOperand::Abelian(fs) => match fs[0].group() {
            GroupDescriptor::FiniteAbelian { .. } => {
                Ok(normalized_lp(pointwise_square_function(fs)?, p))
            }
            GroupDescriptor::Torus { .. } => {
                let refs: Vec<&GroupAlgebraElement> = fs.iter().collect();
                if let Some(k) = even_half(p) {
                    Ok(mean_power(&sum_of_squares(&refs), k).powf(1.0 / p))
                } else {
                    let values = torus_grid_values(&refs, 4)?;
                    let pointwise = (0..values[0].len()).map(|x| values.iter().map(|v| v[x].norm_sqr()).sum::<f64>().sqrt());
                    Ok(normalized_lp(pointwise, p))
                }
            }
            g => Err(free_kind_error(g)),
        },
    }
}

/// `x -> (sum_j |f_j(x)|^2)^{1/2}` on the dual of a finite abelian group,
/// restricted to the coordinates active in some component.
pub(crate) fn pointwise_square_function(fs: &[GroupAlgebraElement]) -> Result<Vec<f64>> {
    let group = fs[0].group();
    let moduli = group.moduli().ok_or_else(|| Error::Unsupported { op: "square function", kind: group.to_string() })?;
    let active: Vec<usize> = (0..moduli.len())
        .filter(|&j| fs.iter().any(|f| f.support().any(|g| g.as_tuple().is_some_and(|t| t[j] != 0))))
        .collect();
    let sub: Vec<u32> = active.iter().map(|&j| moduli[j]).collect();
    let size: usize = sub.iter().map(|&m| m as usize).product();
    let mut acc = vec![0.0; size];
    for f in fs {
        let coeffs: Vec<(Vec<i64>, Complex64)> = f
            .iter()
            .map(|(g, c)| (active.iter().map(|&j| g.as_tuple().unwrap()[j]).collect(), *c))
            .collect();
        let v = synthesize(coeffs.iter().map(|(g, c)| (g.as_slice(), *c)), &sub);
        for (a, z) in acc.iter_mut().zip(v) {
            *a += z.norm_sqr();
        }
    }
    Ok(acc.into_iter().map(f64::sqrt).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct KhintchineReport {
    /// `E_eps || sum_j eps_j x_j ||_p^p`
    pub sign_average: f64,
    pub column: f64,
    pub row: f64,
    /// `sign_average / max(column, row)^p`
    pub ratio: f64,
}

/// Exhaustive Rademacher average against the larger square function.
pub fn khintchine_ratio(xs: &[MatrixOperand], p: f64) -> Result<KhintchineReport> {
    if p < 2.0 {
        return Err(Error::InvalidParameter(format!("khintchine ratio needs p >= 2, got {p}")));
    }
    common_dim(xs)?;
    let n = xs.len();
    if n > MAX_KHINTCHINE_TERMS {
        return Err(Error::InvalidParameter(format!("at most {MAX_KHINTCHINE_TERMS} matrices, got {n}")));
    }
    // eps and -eps give the same norm: fix eps_1 = +1
    let half = 1usize << (n - 1);
    let norms: Vec<f64> = (0..half)
        .into_par_iter()
        .map(|mask| {
            let signs: Vec<f64> = (0..n).map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let x = MatrixOperand::combination(xs, &signs)?;
            Ok(schatten_norm(&x, p)?.powf(p))
        })
        .collect::<Result<_>>()?;
    let sign_average = norms.iter().sum::<f64>() / half as f64;
    let column = square_function_norm(&SquareFunctionOperand::Matrix { components: xs.to_vec(), side: Side::Column }, p)?;
    let row = square_function_norm(&SquareFunctionOperand::Matrix { components: xs.to_vec(), side: Side::Row }, p)?;
    let denom = column.max(row).powf(p);
    if denom == 0.0 {
        return Err(Error::Numerical("all matrices vanish".into()));
    }
    Ok(KhintchineReport { sign_average, column, row, ratio: sign_average / denom })
}
