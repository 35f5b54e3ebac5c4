//! Group descriptors and group elements.
//!
//! Four kinds of groups are supported: finite abelian products
//! `Z_{m_1} x ... x Z_{m_n}`, the lattice `Z^n` viewed through trigonometric
//! polynomials on `T^n` with a frequency bound, the free group `F_n` and the
//! free product `Z_{2m}^{*n}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{ReducedWord, WordKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescriptor {
    /// `Z_{m_1} x ... x Z_{m_n}`; `Omega_n` is all moduli equal to 2.
    FiniteAbelian { moduli: Vec<u32> },
    /// Frequencies in `Z^n` with every entry bounded by `bound` in modulus.
    Torus { rank: usize, bound: u32 },
    Free { rank: usize },
    /// Free product of `rank` copies of `Z_modulus`, `modulus` even.
    FreeProduct { rank: usize, modulus: u32 },
}

/// A group element: an integer tuple for the abelian kinds, a reduced word
/// for the free kinds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Tuple(Vec<i64>),
    Word(ReducedWord),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Tuple(t) => write!(f, "{t:?}"),
            GroupElement::Word(w) => write!(f, "{w}"),
        }
    }
}

impl GroupElement {
    pub fn as_tuple(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Tuple(t) => Some(t),
            GroupElement::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&ReducedWord> {
        match self {
            GroupElement::Word(w) => Some(w),
            GroupElement::Tuple(_) => None,
        }
    }
}

impl From<ReducedWord> for GroupElement {
    fn from(w: ReducedWord) -> Self {
        GroupElement::Word(w)
    }
}

impl GroupDescriptor {
    /// The hypercube `Omega_n = Z_2^n`.
    pub fn hypercube(n: usize) -> Self {
        GroupDescriptor::FiniteAbelian { moduli: vec![2; n] }
    }

    /// `Z_q^n`.
    pub fn cyclic_power(q: u32, n: usize) -> Self {
        GroupDescriptor::FiniteAbelian { moduli: vec![q; n] }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            GroupDescriptor::FiniteAbelian { moduli } => !moduli.is_empty() && moduli.iter().all(|&m| m >= 2),
            GroupDescriptor::Torus { rank, .. } => *rank >= 1,
            GroupDescriptor::Free { rank } => *rank >= 1,
            GroupDescriptor::FreeProduct { rank, modulus } => *rank >= 1 && *modulus >= 2 && modulus % 2 == 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGroup(self.to_string()))
        }
    }

    /// Number of coordinates / generators `n`.
    pub fn rank(&self) -> usize {
        match self {
            GroupDescriptor::FiniteAbelian { moduli } => moduli.len(),
            GroupDescriptor::Torus { rank, .. }
            | GroupDescriptor::Free { rank }
            | GroupDescriptor::FreeProduct { rank, .. } => *rank,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupDescriptor::FiniteAbelian { .. } | GroupDescriptor::Torus { .. })
    }

    pub fn is_free_kind(&self) -> bool {
        !self.is_abelian()
    }

    pub fn word_kind(&self) -> Option<WordKind> {
        match *self {
            GroupDescriptor::Free { rank } => Some(WordKind::Free { rank }),
            GroupDescriptor::FreeProduct { rank, modulus } => Some(WordKind::FreeProduct { rank, modulus }),
            _ => None,
        }
    }

    pub fn moduli(&self) -> Option<&[u32]> {
        match self {
            GroupDescriptor::FiniteAbelian { moduli } => Some(moduli),
            _ => None,
        }
    }

    /// Order of the group (finite abelian only).
    pub fn order(&self) -> Option<usize> {
        self.moduli().map(|m| m.iter().map(|&q| q as usize).product())
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::FiniteAbelian { .. } | GroupDescriptor::Torus { .. } => {
                GroupElement::Tuple(vec![0; self.rank()])
            }
            _ => GroupElement::Word(ReducedWord::identity()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Tuple(t) => t.iter().all(|&x| x == 0),
            GroupElement::Word(w) => w.is_identity(),
        }
    }

    /// Membership of `g`, including canonical form (entries reduced mod `m_j`,
    /// frequencies within the torus bound, words reduced).
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupDescriptor::FiniteAbelian { moduli }, GroupElement::Tuple(t)) => {
                t.len() == moduli.len() && t.iter().zip(moduli).all(|(&x, &m)| x >= 0 && x < m as i64)
            }
            (GroupDescriptor::Torus { rank, bound }, GroupElement::Tuple(t)) => {
                t.len() == *rank && t.iter().all(|x| x.unsigned_abs() <= *bound as u64)
            }
            (_, GroupElement::Word(w)) => self.word_kind().is_some_and(|k| k.contains(w)),
            _ => false,
        }
    }

    /// Bring a raw element to canonical form (entries mod `m_j`, words reduced).
    pub fn canonical(&self, g: GroupElement) -> Result<GroupElement> {
        let out = match (self, g) {
            (GroupDescriptor::FiniteAbelian { moduli }, GroupElement::Tuple(t)) if t.len() == moduli.len() => {
                GroupElement::Tuple(t.iter().zip(moduli).map(|(&x, &m)| x.rem_euclid(m as i64)).collect())
            }
            (GroupDescriptor::Torus { rank, .. }, GroupElement::Tuple(t)) if t.len() == *rank => GroupElement::Tuple(t),
            (_, GroupElement::Word(w)) if self.word_kind().is_some() => {
                GroupElement::Word(self.word_kind().unwrap().reduce(w.blocks())?)
            }
            (_, g) => return Err(Error::NotInGroup(format!("{g} in {self}"))),
        };
        if self.contains(&out) {
            Ok(out)
        } else {
            Err(Error::NotInGroup(format!("{out} in {self}")))
        }
    }

    /// Group law. On the torus the product may leave the frequency box.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (a, b) {
            (GroupElement::Tuple(x), GroupElement::Tuple(y)) => {
                let sum = x.iter().zip(y).map(|(p, q)| p + q);
                match self {
                    GroupDescriptor::FiniteAbelian { moduli } => GroupElement::Tuple(
                        sum.zip(moduli).map(|(s, &m)| s.rem_euclid(m as i64)).collect(),
                    ),
                    _ => GroupElement::Tuple(sum.collect()),
                }
            }
            (GroupElement::Word(x), GroupElement::Word(y)) => {
                GroupElement::Word(self.word_kind().expect("word group").mul(x, y))
            }
            _ => panic!("mixed element kinds in {self}"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Tuple(t) => match self {
                GroupDescriptor::FiniteAbelian { moduli } => GroupElement::Tuple(
                    t.iter().zip(moduli).map(|(&x, &m)| (-x).rem_euclid(m as i64)).collect(),
                ),
                _ => GroupElement::Tuple(t.iter().map(|x| -x).collect()),
            },
            GroupElement::Word(w) => GroupElement::Word(self.word_kind().expect("word group").inverse(w)),
        }
    }

    /// Whether `g` lies in the subgroup `B_S` generated by the coordinates
    /// (or generators) in `subset`. Indices are 1-based.
    pub fn in_subgroup(&self, g: &GroupElement, subset: &[usize]) -> bool {
        match g {
            GroupElement::Tuple(t) => t.iter().enumerate().all(|(j, &x)| x == 0 || subset.contains(&(j + 1))),
            GroupElement::Word(w) => w.blocks().iter().all(|(gen, _)| subset.contains(gen)),
        }
    }

    /// Every element of a finite abelian group, in lexicographic order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let moduli = self
            .moduli()
            .ok_or_else(|| Error::Unsupported { op: "elements", kind: self.to_string() })?;
        Ok(lex_points(moduli).into_iter().map(GroupElement::Tuple).collect())
    }

    /// Frequencies in the torus box `[-M, M]^n`, lexicographic.
    pub fn box_points(&self) -> Result<Vec<GroupElement>> {
        match self {
            GroupDescriptor::Torus { rank, bound } => {
                let width = vec![2 * bound + 1; *rank];
                Ok(lex_points(&width)
                    .into_iter()
                    .map(|p| GroupElement::Tuple(p.into_iter().map(|x| x - *bound as i64).collect()))
                    .collect())
            }
            GroupDescriptor::FiniteAbelian { .. } => self.elements(),
            _ => Err(Error::Unsupported { op: "box_points", kind: self.to_string() }),
        }
    }

    /// Smallest descriptor containing elements of both operands; the torus
    /// bounds combine through `combine`.
    pub(crate) fn join(&self, other: &Self, combine: impl Fn(u32, u32) -> u32) -> Result<Self> {
        match (self, other) {
            (GroupDescriptor::Torus { rank: a, bound: x }, GroupDescriptor::Torus { rank: b, bound: y }) if a == b => {
                Ok(GroupDescriptor::Torus { rank: *a, bound: combine(*x, *y) })
            }
            _ if self == other => Ok(self.clone()),
            _ => Err(Error::GroupMismatch(self.to_string(), other.to_string())),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::FiniteAbelian { moduli } => {
                let parts: Vec<String> = moduli.iter().map(|m| format!("Z_{m}")).collect();
                write!(f, "{}", parts.join(" x "))
            }
            GroupDescriptor::Torus { rank, bound } => write!(f, "Z^{rank} (|freq| <= {bound})"),
            GroupDescriptor::Free { rank } => write!(f, "F_{rank}"),
            GroupDescriptor::FreeProduct { rank, modulus } => write!(f, "Z_{modulus}^(*{rank})"),
        }
    }
}

/// All points of `prod_j [0, width_j)`, last coordinate varying fastest.
pub(crate) fn lex_points(widths: &[u32]) -> Vec<Vec<i64>> {
    let total: usize = widths.iter().map(|&w| w as usize).product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0i64; widths.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for j in (0..widths.len()).rev() {
            cur[j] += 1;
            if cur[j] < widths[j] as i64 {
                break;
            }
            cur[j] = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order() {
        let pts = lex_points(&[2, 3]);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[3], vec![1, 0]);
    }

    #[test]
    fn validation() {
        assert!(GroupDescriptor::FiniteAbelian { moduli: vec![1] }.validate().is_err());
        assert!(GroupDescriptor::FreeProduct { rank: 2, modulus: 3 }.validate().is_err());
        assert!(GroupDescriptor::Torus { rank: 0, bound: 1 }.validate().is_err());
        assert!(GroupDescriptor::hypercube(3).validate().is_ok());
    }

    #[test]
    fn law_and_canonical_form() {
        let g = GroupDescriptor::cyclic_power(4, 2);
        let a = GroupElement::Tuple(vec![3, 1]);
        let b = GroupElement::Tuple(vec![2, 3]);
        assert_eq!(g.mul(&a, &b), GroupElement::Tuple(vec![1, 0]));
        assert_eq!(g.inverse(&a), GroupElement::Tuple(vec![1, 3]));
        assert_eq!(g.canonical(GroupElement::Tuple(vec![-1, 5])).unwrap(), GroupElement::Tuple(vec![3, 1]));
        let t = GroupDescriptor::Torus { rank: 1, bound: 2 };
        assert!(t.canonical(GroupElement::Tuple(vec![3])).is_err());
    }

    #[test]
    fn subgroups() {
        let g = GroupDescriptor::hypercube(3);
        assert!(g.in_subgroup(&GroupElement::Tuple(vec![1, 0, 1]), &[1, 3]));
        assert!(!g.in_subgroup(&GroupElement::Tuple(vec![1, 1, 0]), &[1, 3]));
    }
}
