//! Finitely supported elements `f = sum_g f(g) lambda(g)` of a group algebra.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cocycle::LengthCocycle;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::tolerance::PRUNE;
use crate::words::ReducedWord;

/// Fourier coefficient map over a group. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement {
    group: GroupDescriptor,
    coeffs: BTreeMap<GroupElement, Complex64>,
}

impl GroupAlgebraElement {
    pub fn zero(group: GroupDescriptor) -> Self {
        GroupAlgebraElement { group, coeffs: BTreeMap::new() }
    }

    /// `lambda(g)`.
    pub fn basis(group: GroupDescriptor, g: GroupElement) -> Result<Self> {
        Self::from_coeffs(group, [(g, Complex64::new(1.0, 0.0))])
    }

    /// The unit `lambda(e)`.
    pub fn unit(group: GroupDescriptor) -> Self {
        let e = group.identity();
        Self::from_parts(group, [(e, Complex64::new(1.0, 0.0))])
    }

    /// Build from coefficients, bringing every element to canonical form.
    /// Repeated elements accumulate.
    pub fn from_coeffs(
        group: GroupDescriptor,
        coeffs: impl IntoIterator<Item = (GroupElement, Complex64)>,
    ) -> Result<Self> {
        group.validate()?;
        let mut map = BTreeMap::new();
        for (g, c) in coeffs {
            let g = group.canonical(g)?;
            *map.entry(g).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut out = GroupAlgebraElement { group, coeffs: map };
        out.prune();
        Ok(out)
    }

    /// Trusted constructor for elements already known to be canonical.
    pub(crate) fn from_parts(
        group: GroupDescriptor,
        coeffs: impl IntoIterator<Item = (GroupElement, Complex64)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (g, c) in coeffs {
            *map.entry(g).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut out = GroupAlgebraElement { group, coeffs: map };
        out.prune();
        out
    }

    /// Convenience for abelian groups: coefficients indexed by integer tuples.
    pub fn from_tuples(group: GroupDescriptor, coeffs: &[(&[i64], Complex64)]) -> Result<Self> {
        Self::from_coeffs(group, coeffs.iter().map(|(g, c)| (GroupElement::Tuple(g.to_vec()), *c)))
    }

    /// Convenience for free kinds: coefficients indexed by raw block lists.
    pub fn from_words(group: GroupDescriptor, coeffs: &[(&[(usize, i64)], Complex64)]) -> Result<Self> {
        let kind = group
            .word_kind()
            .ok_or_else(|| Error::Unsupported { op: "from_words", kind: group.to_string() })?;
        let mut items = Vec::with_capacity(coeffs.len());
        for (raw, c) in coeffs {
            items.push((GroupElement::Word(kind.reduce(raw)?), *c));
        }
        Self::from_coeffs(group, items)
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() >= PRUNE);
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn coeff(&self, g: &GroupElement) -> Complex64 {
        self.coeffs.get(g).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.coeffs.keys()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether the coefficient at the identity vanishes.
    pub fn is_mean_zero(&self) -> bool {
        self.coeff(&self.group.identity()) == Complex64::default()
    }

    pub(crate) fn require_mean_zero(&self) -> Result<()> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(Error::NotMeanZero(format!("{}", self.coeff(&self.group.identity()))))
        }
    }

    /// Coefficient-wise map; the group is unchanged.
    pub fn map(&self, mut symbol: impl FnMut(&GroupElement, Complex64) -> Complex64) -> Self {
        Self::from_parts(
            self.group.clone(),
            self.coeffs.iter().map(|(g, &c)| (g.clone(), symbol(g, c))),
        )
    }

    /// Keep the coefficients whose element satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&GroupElement) -> bool) -> Self {
        GroupAlgebraElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().filter(|(g, _)| keep(g)).map(|(g, c)| (g.clone(), *c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|_, c| c * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let group = self.group.join(&other.group, u32::max)?;
        Ok(Self::from_parts(
            group,
            self.coeffs.iter().chain(other.coeffs.iter()).map(|(g, c)| (g.clone(), *c)),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `sum_g |f(g)|^2`.
    pub fn coeff_l2_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient-wise difference to `other` (same group kind).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (g, c) in &self.coeffs {
            worst = worst.max((c - other.coeff(g)).norm());
        }
        for (g, c) in &other.coeffs {
            if !self.coeffs.contains_key(g) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Re-interpret a torus polynomial with a different frequency bound.
    pub fn with_group(&self, group: GroupDescriptor) -> Result<Self> {
        group.validate()?;
        for g in self.coeffs.keys() {
            if !group.contains(g) {
                return Err(Error::NotInGroup(format!("{g} in {group}")));
            }
        }
        Ok(GroupAlgebraElement { group, coeffs: self.coeffs.clone() })
    }
}

/// `f * h`: the coefficient at `g` is `sum_{ab = g} f(a) h(b)`.
///
/// On the torus the frequency bound of the result is the sum of the bounds.
pub fn convolve(f: &GroupAlgebraElement, h: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    let group = f.group.join(&h.group, |a, b| a + b)?;
    let mut acc: BTreeMap<GroupElement, Complex64> = BTreeMap::new();
    for (a, ca) in &f.coeffs {
        for (b, cb) in &h.coeffs {
            *acc.entry(group.mul(a, b)).or_default() += ca * cb;
        }
    }
    Ok(GroupAlgebraElement::from_parts(group, acc))
}

/// `f^* = sum_g conj(f(g)) lambda(g^{-1})`.
pub fn adjoint(f: &GroupAlgebraElement) -> GroupAlgebraElement {
    GroupAlgebraElement {
        group: f.group.clone(),
        coeffs: f.coeffs.iter().map(|(g, c)| (f.group.inverse(g), c.conj())).collect(),
    }
}

/// Canonical trace `tau(f) = f(e)`.
pub fn trace(f: &GroupAlgebraElement) -> Complex64 {
    f.coeff(&f.group.identity())
}

/// Zero every coefficient at which the length function vanishes.
pub fn project_mean_zero(f: &GroupAlgebraElement, psi: &LengthCocycle) -> Result<GroupAlgebraElement> {
    psi.check_group(f.group())?;
    Ok(f.filter(|g| psi.psi(g) != 0.0))
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    g: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    word: Option<ReducedWord>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    group: GroupDescriptor,
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for GroupAlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(g, c)| {
                let (g, word) = match g {
                    GroupElement::Tuple(t) => (Some(t.clone()), None),
                    GroupElement::Word(w) => (None, Some(w.clone())),
                };
                CoeffEntry { g, word, re: c.re, im: c.im }
            })
            .collect();
        ElementRepr { group: self.group.clone(), coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupAlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ElementRepr::deserialize(deserializer)?;
        let mut items = Vec::with_capacity(repr.coeffs.len());
        for entry in repr.coeffs {
            let g = match (entry.g, entry.word) {
                (Some(t), None) => GroupElement::Tuple(t),
                (None, Some(w)) => GroupElement::Word(w),
                _ => return Err(D::Error::custom("each coefficient needs exactly one of \"g\" or \"word\"")),
            };
            items.push((g, Complex64::new(entry.re, entry.im)));
        }
        GroupAlgebraElement::from_coeffs(repr.group, items).map_err(D::Error::custom)
    }
}
