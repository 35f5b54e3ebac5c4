//! Length functions, their Gromov forms, orthonormal bases of the
//! associated cocycle Hilbert spaces and the splitting `H = (+)_j H_j`.
//!
//! Every built-in family comes with two routes to the Gromov form: the
//! defining expression `(psi(g) + psi(h) - psi(g^{-1} h)) / 2` and a closed
//! form. Both are evaluated in exact rational arithmetic wherever the
//! length is integral (all families except the weighted hypercube).

mod basis;
mod schoenberg;

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::words::{common_block_prefix, meet, WordKind};

pub use basis::BasisVectorId;
pub use schoenberg::{conditional_negativity_check, random_sample, NegativityReport};

/// The built-in length functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CocycleFamily {
    /// `psi(g) = sum g_j^2` on `Z^n`; trivial action, `beta = id`.
    Euclidean { rank: usize },
    /// `psi(g) = sum |g_j|` on `Z^n`.
    ZnWord { rank: usize },
    /// `psi(g) = sum min{g_j, 2m - g_j}` on `Z_{2m}^n`. `m = 1` is the hypercube.
    Z2mWord { rank: usize, m: u32 },
    /// `psi(g) = sum min{g_j, 2m + 1 - g_j}` on `Z_{2m+1}^n`. No basis.
    OddTorus { rank: usize, m: u32 },
    /// Word length on `F_n`.
    Free { rank: usize },
    /// Word length on `Z_{2m}^{*n}`.
    FreeProduct { rank: usize, m: u32 },
    /// `psi(A) = || 1 - W_A ||^2` in `L_2(Gamma, mu)`, `mu = sum alpha_j delta_{w_j}`.
    WeightedCube { alpha: Vec<f64> },
}

impl CocycleFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CocycleFamily::Euclidean { .. } => "euclidean",
            CocycleFamily::ZnWord { .. } => "zn-word",
            CocycleFamily::Z2mWord { .. } => "z2m-word",
            CocycleFamily::OddTorus { .. } => "odd-torus",
            CocycleFamily::Free { .. } => "free",
            CocycleFamily::FreeProduct { .. } => "free-product",
            CocycleFamily::WeightedCube { .. } => "weighted-cube",
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            CocycleFamily::Euclidean { rank }
            | CocycleFamily::ZnWord { rank }
            | CocycleFamily::Z2mWord { rank, .. }
            | CocycleFamily::OddTorus { rank, .. }
            | CocycleFamily::Free { rank }
            | CocycleFamily::FreeProduct { rank, .. } => *rank,
            CocycleFamily::WeightedCube { alpha } => alpha.len(),
        }
    }

    /// Every built-in family at the given rank, with small default parameters.
    pub fn all_builtin(rank: usize) -> Vec<CocycleFamily> {
        vec![
            CocycleFamily::Euclidean { rank },
            CocycleFamily::ZnWord { rank },
            CocycleFamily::Z2mWord { rank, m: 1 },
            CocycleFamily::Z2mWord { rank, m: 2 },
            CocycleFamily::Z2mWord { rank, m: 3 },
            CocycleFamily::OddTorus { rank, m: 1 },
            CocycleFamily::OddTorus { rank, m: 2 },
            CocycleFamily::Free { rank },
            CocycleFamily::FreeProduct { rank, m: 1 },
            CocycleFamily::FreeProduct { rank, m: 2 },
            CocycleFamily::WeightedCube { alpha: (1..=rank).map(|j| 0.5 * j as f64).collect() },
        ]
    }
}

impl CocycleFamily {
    /// Parses the display form, e.g. `z2m-word(n=3, m=2)`, `free(n=2)` or
    /// `weighted-cube(alpha=[0.5, 1])`. A bare name takes its rank from
    /// `default_rank`, `m = 1` and unit weights.
    pub fn parse(s: &str, default_rank: Option<usize>) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("cannot parse cocycle family {s:?}: {why}"));
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => (name.trim(), rest.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?),
            None => (s, ""),
        };
        let mut rank = None;
        let mut m = 1u32;
        let mut alpha: Option<Vec<f64>> = None;
        let mut depth = 0;
        let mut start = 0;
        let mut parts = Vec::new();
        for (i, ch) in args.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&args[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&args[start..]);
        for part in parts.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let value = value.trim();
            match key.trim() {
                "n" | "rank" => rank = Some(value.parse().map_err(|_| bad("rank must be an integer"))?),
                "m" => m = value.parse().map_err(|_| bad("m must be an integer"))?,
                "alpha" => alpha = Some(serde_json::from_str(value).map_err(|_| bad("alpha must be a list of numbers"))?),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        if let Some(a) = alpha {
            if name != "weighted-cube" {
                return Err(bad("alpha applies to weighted-cube only"));
            }
            if rank.is_some_and(|r| r != a.len()) {
                return Err(bad("alpha length differs from n"));
            }
            return Ok(CocycleFamily::WeightedCube { alpha: a });
        }
        let rank = rank.or(default_rank).ok_or_else(|| bad("rank n is required"))?;
        Ok(match name {
            "euclidean" => CocycleFamily::Euclidean { rank },
            "zn-word" => CocycleFamily::ZnWord { rank },
            "z2m-word" => CocycleFamily::Z2mWord { rank, m },
            "odd-torus" => CocycleFamily::OddTorus { rank, m },
            "free" => CocycleFamily::Free { rank },
            "free-product" => CocycleFamily::FreeProduct { rank, m },
            "weighted-cube" => CocycleFamily::WeightedCube { alpha: vec![1.0; rank] },
            _ => return Err(bad("unknown name (euclidean, zn-word, z2m-word, odd-torus, free, free-product, weighted-cube)")),
        })
    }

    /// The word-length family living on `group`, if there is one.
    pub fn for_group(group: &GroupDescriptor) -> Option<Self> {
        let rank = group.rank();
        match group {
            GroupDescriptor::Torus { .. } => Some(CocycleFamily::ZnWord { rank }),
            GroupDescriptor::Free { .. } => Some(CocycleFamily::Free { rank }),
            GroupDescriptor::FreeProduct { modulus, .. } if modulus % 2 == 0 => {
                Some(CocycleFamily::FreeProduct { rank, m: modulus / 2 })
            }
            GroupDescriptor::FiniteAbelian { moduli } => match moduli.first() {
                Some(&q) if q >= 2 && moduli.iter().all(|&x| x == q) => Some(if q % 2 == 0 {
                    CocycleFamily::Z2mWord { rank, m: q / 2 }
                } else {
                    CocycleFamily::OddTorus { rank, m: q / 2 }
                }),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for CocycleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleFamily::Z2mWord { rank, m } | CocycleFamily::OddTorus { rank, m } | CocycleFamily::FreeProduct { rank, m } => {
                write!(f, "{}(n={rank}, m={m})", self.name())
            }
            CocycleFamily::WeightedCube { alpha } => write!(f, "{}(alpha={alpha:?})", self.name()),
            _ => write!(f, "{}(n={})", self.name(), self.rank()),
        }
    }
}

/// A length function together with its cocycle data.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthCocycle {
    family: CocycleFamily,
    group: GroupDescriptor,
}

fn int(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

impl LengthCocycle {
    /// Assemble the cocycle of a built-in family.
    pub fn build(family: CocycleFamily) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("{family}: {msg}")));
        if family.rank() == 0 {
            return bad("rank must be at least 1");
        }
        let group = match &family {
            CocycleFamily::Euclidean { rank } | CocycleFamily::ZnWord { rank } => {
                GroupDescriptor::Torus { rank: *rank, bound: 0 }
            }
            CocycleFamily::Z2mWord { m: 0, .. } | CocycleFamily::OddTorus { m: 0, .. } => {
                return bad("m must be at least 1")
            }
            CocycleFamily::Z2mWord { rank, m } => GroupDescriptor::cyclic_power(2 * m, *rank),
            CocycleFamily::OddTorus { rank, m } => GroupDescriptor::cyclic_power(2 * m + 1, *rank),
            CocycleFamily::Free { rank } => GroupDescriptor::Free { rank: *rank },
            CocycleFamily::FreeProduct { m: 0, .. } => return bad("m must be at least 1"),
            CocycleFamily::FreeProduct { rank, m } => GroupDescriptor::FreeProduct { rank: *rank, modulus: 2 * m },
            CocycleFamily::WeightedCube { alpha } => {
                if alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                    return bad("weights must be positive");
                }
                GroupDescriptor::hypercube(alpha.len())
            }
        };
        Ok(LengthCocycle { family, group })
    }

    /// `psi(A) = 4 sum_{j in A} alpha_j` on `Omega_n`.
    pub fn weighted_hypercube(alpha: &[f64]) -> Result<Self> {
        Self::build(CocycleFamily::WeightedCube { alpha: alpha.to_vec() })
    }

    pub fn family(&self) -> &CocycleFamily {
        &self.family
    }

    /// The group the length lives on. For the `Z^n` families the torus
    /// bound is irrelevant and reported as 0.
    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.family.rank()
    }

    pub(crate) fn word_kind(&self) -> Option<WordKind> {
        self.group.word_kind()
    }

    /// Accept elements of `group` (any torus bound for the `Z^n` families).
    pub fn check_group(&self, group: &GroupDescriptor) -> Result<()> {
        let ok = match (&self.group, group) {
            (GroupDescriptor::Torus { rank: a, .. }, GroupDescriptor::Torus { rank: b, .. }) => a == b,
            (a, b) => a == b,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.family.to_string(), group.to_string()))
        }
    }

    fn tuple<'a>(&self, g: &'a GroupElement) -> &'a [i64] {
        g.as_tuple().expect("abelian family expects tuple elements")
    }

    fn cyclic_len(x: i64, q: i64) -> i64 {
        let x = x.rem_euclid(q);
        x.min(q - x)
    }

    /// Exact length, `None` for the weighted hypercube.
    pub fn psi_exact(&self, g: &GroupElement) -> Option<Rational64> {
        let v = match &self.family {
            CocycleFamily::Euclidean { .. } => self.tuple(g).iter().map(|x| x * x).sum(),
            CocycleFamily::ZnWord { .. } => self.tuple(g).iter().map(|x| x.abs()).sum(),
            CocycleFamily::Z2mWord { m, .. } => self.tuple(g).iter().map(|&x| Self::cyclic_len(x, 2 * *m as i64)).sum(),
            CocycleFamily::OddTorus { m, .. } => {
                self.tuple(g).iter().map(|&x| Self::cyclic_len(x, 2 * *m as i64 + 1)).sum()
            }
            CocycleFamily::Free { .. } | CocycleFamily::FreeProduct { .. } => {
                let w = g.as_word().expect("free family expects words");
                self.word_kind().unwrap().length(w) as i64
            }
            CocycleFamily::WeightedCube { .. } => return None,
        };
        Some(int(v))
    }

    /// `psi(g)` as a float.
    pub fn psi(&self, g: &GroupElement) -> f64 {
        match &self.family {
            CocycleFamily::WeightedCube { alpha } => {
                4.0 * self.tuple(g).iter().zip(alpha).filter(|(&x, _)| x != 0).map(|(_, a)| a).sum::<f64>()
            }
            _ => {
                let r = self.psi_exact(g).unwrap();
                *r.numer() as f64 / *r.denom() as f64
            }
        }
    }

    /// Weighted hypercube length from its defining expression
    /// `sum_i alpha_i |1 - W_A(w_i)|^2`, where `W_A(w_i) = -1` iff `i in A`.
    pub fn weighted_psi_from_measure(alpha: &[f64], subset: &[i64]) -> f64 {
        alpha
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let walsh = if subset[i] != 0 { -1.0 } else { 1.0 };
                a * (1.0 - walsh) * (1.0 - walsh)
            })
            .sum()
    }

    /// `<delta_g, delta_h>_psi = (psi(g) + psi(h) - psi(g^{-1} h)) / 2`, exact.
    pub fn gromov_defining_exact(&self, g: &GroupElement, h: &GroupElement) -> Result<Rational64> {
        let gh = self.group.mul(&self.group.inverse(g), h);
        match (self.psi_exact(g), self.psi_exact(h), self.psi_exact(&gh)) {
            (Some(a), Some(b), Some(c)) => Ok((a + b - c) / int(2)),
            _ => Err(self.unsupported("exact Gromov form")),
        }
    }

    /// Defining expression in floating point (all families).
    pub fn gromov_defining(&self, g: &GroupElement, h: &GroupElement) -> f64 {
        let gh = self.group.mul(&self.group.inverse(g), h);
        0.5 * (self.psi(g) + self.psi(h) - self.psi(&gh))
    }

    /// Closed form of the Gromov form, exact.
    pub fn gromov_form_exact(&self, g: &GroupElement, h: &GroupElement) -> Result<Rational64> {
        let per_coordinate = |f: &dyn Fn(i64, i64) -> Rational64| -> Rational64 {
            self.tuple(g).iter().zip(self.tuple(h)).map(|(&a, &b)| f(a, b)).sum()
        };
        match &self.family {
            CocycleFamily::Euclidean { .. } => Ok(per_coordinate(&|a, b| int(a * b))),
            CocycleFamily::ZnWord { .. } => {
                Ok(per_coordinate(&|a, b| if a * b > 0 { int(a.abs().min(b.abs())) } else { int(0) }))
            }
            CocycleFamily::Z2mWord { m, .. } => {
                let m = *m as i64;
                Ok(per_coordinate(&|a, b| {
                    // representatives in 1..=2m, ordered
                    let lift = |x: i64| if x == 0 { 2 * m } else { x };
                    let (l, lp) = (lift(a).min(lift(b)), lift(a).max(lift(b)));
                    int(l.min(2 * m - lp).min((m - lp + l).max(0)))
                }))
            }
            CocycleFamily::OddTorus { m, .. } => {
                let m = *m as i64;
                Ok(per_coordinate(&|a, b| {
                    let (x, y) = (a.min(b), a.max(b));
                    let half = Rational64::new(1, 2);
                    let third = (int(m - y + x) + half).max(int(0));
                    int(x).min(int(2 * m + 1 - y)).min(third)
                }))
            }
            CocycleFamily::Free { .. } => {
                let (a, b) = (g.as_word().unwrap(), h.as_word().unwrap());
                Ok(int(self.word_kind().unwrap().length(&meet(a, b)) as i64))
            }
            CocycleFamily::FreeProduct { .. } => {
                let kind = self.word_kind().unwrap();
                let (a, b) = (g.as_word().unwrap(), h.as_word().unwrap());
                let c = common_block_prefix(a, b);
                let shared = kind.length(&a.prefix(c)) as i64;
                // Only the first syllables of the two tails can interact.
                let tail = match (a.blocks().get(c), b.blocks().get(c)) {
                    (Some(&(ga, x)), Some(&(gb, y))) if ga == gb => {
                        let len = |e: i64| kind.syllable_length(e) as i64;
                        Rational64::new(len(x) + len(y) - len(y - x), 2)
                    }
                    _ => int(0),
                };
                Ok(int(shared) + tail)
            }
            CocycleFamily::WeightedCube { .. } => Err(self.unsupported("exact Gromov form")),
        }
    }

    /// Closed form of the Gromov form as a float (all families).
    pub fn gromov_form(&self, g: &GroupElement, h: &GroupElement) -> Result<f64> {
        match &self.family {
            CocycleFamily::WeightedCube { alpha } => {
                let (a, b) = (self.tuple(g), self.tuple(h));
                Ok(4.0 * (0..alpha.len()).filter(|&j| a[j] != 0 && b[j] != 0).map(|j| alpha[j]).sum::<f64>())
            }
            _ => {
                let r = self.gromov_form_exact(g, h)?;
                Ok(*r.numer() as f64 / *r.denom() as f64)
            }
        }
    }

    /// Exact group-wide spectral gap `min { psi(g) : psi(g) != 0 }`.
    pub fn gap(&self) -> f64 {
        match &self.family {
            CocycleFamily::WeightedCube { alpha } => 4.0 * alpha.iter().cloned().fold(f64::INFINITY, f64::min),
            _ => 1.0,
        }
    }

    /// Smallest nonzero length over a sample.
    pub fn spectral_gap(&self, sample: &[GroupElement]) -> Result<f64> {
        sample
            .iter()
            .map(|g| self.psi(g))
            .filter(|&v| v != 0.0)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
            .ok_or_else(|| Error::Precondition("sample has no element of nonzero length".into()))
    }

    /// Whether the family carries an explicit orthonormal basis.
    pub fn has_basis(&self) -> bool {
        !matches!(self.family, CocycleFamily::OddTorus { .. })
    }

    /// Whether the family carries distinguished (absorbent) derivatives.
    pub fn has_distinguished_derivatives(&self) -> bool {
        !matches!(self.family, CocycleFamily::OddTorus { .. })
    }

    pub(crate) fn unsupported(&self, op: &'static str) -> Error {
        Error::Unsupported { op, kind: self.family.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lex_points;

    fn t(x: &[i64]) -> GroupElement {
        GroupElement::Tuple(x.to_vec())
    }

    #[test]
    fn family_parse_round_trip() {
        for rank in 1..=3 {
            for f in CocycleFamily::all_builtin(rank) {
                assert_eq!(CocycleFamily::parse(&f.to_string(), None).unwrap(), f);
                let c = LengthCocycle::build(f.clone()).unwrap();
                if !matches!(f, CocycleFamily::Euclidean { .. } | CocycleFamily::WeightedCube { .. }) {
                    assert_eq!(CocycleFamily::for_group(c.group()), Some(f));
                }
            }
        }
        assert_eq!(CocycleFamily::parse("free-product", Some(2)).unwrap(), CocycleFamily::FreeProduct { rank: 2, m: 1 });
        assert_eq!(
            CocycleFamily::parse("z2m-word(m=3)", Some(4)).unwrap(),
            CocycleFamily::Z2mWord { rank: 4, m: 3 }
        );
        assert!(CocycleFamily::parse("free", None).is_err());
        assert!(CocycleFamily::parse("weighted-cube(n=3, alpha=[1, 2])", None).is_err());
        assert!(CocycleFamily::parse("circle(n=1)", None).is_err());
        assert!(CocycleFamily::parse("free(n=2, q=1)", None).is_err());
    }

    #[test]
    fn gromov_examples() {
        let word = LengthCocycle::build(CocycleFamily::ZnWord { rank: 2 }).unwrap();
        assert_eq!(word.gromov_form_exact(&t(&[2, 0]), &t(&[3, 0])).unwrap(), int(2));
        assert_eq!(word.gromov_defining_exact(&t(&[2, 0]), &t(&[3, 0])).unwrap(), int(2));
        assert_eq!(word.gromov_form_exact(&t(&[1, 0]), &t(&[-1, 0])).unwrap(), int(0));
        assert_eq!(word.gromov_defining_exact(&t(&[1, 0]), &t(&[-1, 0])).unwrap(), int(0));
        let z4 = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 1, m: 2 }).unwrap();
        assert_eq!(z4.gromov_form_exact(&t(&[1]), &t(&[3])).unwrap(), int(0));
        assert_eq!(z4.gromov_defining_exact(&t(&[1]), &t(&[3])).unwrap(), int(0));
    }

    #[test]
    fn odd_torus_half_integers() {
        let z3 = LengthCocycle::build(CocycleFamily::OddTorus { rank: 1, m: 1 }).unwrap();
        assert_eq!(z3.gromov_form_exact(&t(&[1]), &t(&[2])).unwrap(), Rational64::new(1, 2));
        for m in 1..=3u32 {
            let c = LengthCocycle::build(CocycleFamily::OddTorus { rank: 2, m }).unwrap();
            for a in lex_points(&[2 * m + 1, 2 * m + 1]) {
                for b in lex_points(&[2 * m + 1, 2 * m + 1]) {
                    let (a, b) = (t(&a), t(&b));
                    assert_eq!(c.gromov_form_exact(&a, &b).unwrap(), c.gromov_defining_exact(&a, &b).unwrap());
                }
            }
        }
    }

    #[test]
    fn weighted_hypercube_lengths() {
        let ones = LengthCocycle::weighted_hypercube(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(ones.psi(&t(&[0, 1, 0])), 4.0);
        assert_eq!(ones.psi(&t(&[0, 0, 0])), 0.0);
        let c = LengthCocycle::weighted_hypercube(&[1.0, 2.0]).unwrap();
        assert_eq!(c.psi(&t(&[1, 1])), 12.0);
        for a in lex_points(&[2, 2]) {
            assert_eq!(c.psi(&t(&a)), LengthCocycle::weighted_psi_from_measure(&[1.0, 2.0], &a));
            for b in lex_points(&[2, 2]) {
                let (x, y) = (t(&a), t(&b));
                assert!((c.gromov_form(&x, &y).unwrap() - c.gromov_defining(&x, &y)).abs() < 1e-12);
            }
        }
        assert_eq!(c.gap(), 4.0);
        assert!(LengthCocycle::weighted_hypercube(&[1.0, 0.0]).is_err());
        assert!(LengthCocycle::weighted_hypercube(&[-1.0]).is_err());
    }

    #[test]
    fn spectral_gaps() {
        let euc = LengthCocycle::build(CocycleFamily::Euclidean { rank: 3 }).unwrap();
        assert_eq!(euc.gap(), 1.0);
        assert_eq!(euc.spectral_gap(&[t(&[0, 0, 0]), t(&[1, 1, 0]), t(&[0, 2, 0])]).unwrap(), 2.0);
        assert!(euc.spectral_gap(&[t(&[0, 0, 0])]).is_err());
        let z6 = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 3 }).unwrap();
        let all: Vec<_> = lex_points(&[6, 6]).iter().map(|p| t(p)).collect();
        assert_eq!(z6.spectral_gap(&all).unwrap(), z6.gap());
        let w = LengthCocycle::weighted_hypercube(&[0.5, 3.0]).unwrap();
        let all: Vec<_> = lex_points(&[2, 2]).iter().map(|p| t(p)).collect();
        assert_eq!(w.spectral_gap(&all).unwrap(), 2.0);
    }

    #[test]
    fn symmetric_and_vanishing_at_identity() {
        for fam in CocycleFamily::all_builtin(2) {
            let c = LengthCocycle::build(fam).unwrap();
            let e = c.group().identity();
            assert_eq!(c.psi(&e), 0.0);
            let sample = random_sample(&c, 12, 9).unwrap();
            for g in &sample {
                assert_eq!(c.psi(g), c.psi(&c.group().inverse(g)), "{} at {g}", c.family());
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 0 }).is_err());
        assert!(LengthCocycle::build(CocycleFamily::Free { rank: 0 }).is_err());
        assert!(LengthCocycle::build(CocycleFamily::FreeProduct { rank: 2, m: 0 }).is_err());
    }
}
