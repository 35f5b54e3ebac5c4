use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{CocycleFamily, LengthCocycle};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::words::{derivative_set_member, leq_free, ReducedWord};

/// Orthonormal basis vectors of the built-in cocycles.
///
/// All indices are 1-based. `ZWord(j, l)` is the edge `delta_{l e_j} -
/// delta_{(l - sgn l) e_j}`, `Z2mWord(j, l)` the edge `delta_{l e_j} -
/// delta_{(l-1) e_j}` with `l in 1..=m`, `FreeWord(w)` and `FreeProdWord(w)`
/// are `delta_w - delta_{w^-}` and `WeightedCube(j)` is `alpha_j^{-1/2}
/// delta_{{j}}` in `L_2(Gamma, mu)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BasisVectorId {
    Euclidean { j: usize },
    ZWord { j: usize, l: i64 },
    Z2mWord { j: usize, l: i64 },
    FreeWord { w: ReducedWord },
    FreeProdWord { w: ReducedWord },
    WeightedCube { j: usize },
}

impl fmt::Display for BasisVectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisVectorId::Euclidean { j } => write!(f, "Euclidean:{j}"),
            BasisVectorId::ZWord { j, l } => write!(f, "ZWord:{j}:{l}"),
            BasisVectorId::Z2mWord { j, l } => write!(f, "Z2mWord:{j}:{l}"),
            BasisVectorId::FreeWord { w } => write!(f, "FreeWord:{}", serde_json::to_string(w).unwrap()),
            BasisVectorId::FreeProdWord { w } => write!(f, "FreeProdWord:{}", serde_json::to_string(w).unwrap()),
            BasisVectorId::WeightedCube { j } => write!(f, "WeightedCube:{j}"),
        }
    }
}

impl FromStr for BasisVectorId {
    type Err = Error;

    /// Parses the `Display` form, e.g. `ZWord:1:2` or `FreeWord:[[1,2],[2,-1]]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot parse basis vector {s:?}"));
        let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        let index = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        let pair = |x: &str| -> Result<(usize, i64)> {
            let (a, b) = x.split_once(':').ok_or_else(bad)?;
            Ok((index(a)?, num(b)?))
        };
        let word = |x: &str| serde_json::from_str::<ReducedWord>(x).map_err(|e| Error::Parse(e.to_string()));
        match tag {
            "Euclidean" => Ok(BasisVectorId::Euclidean { j: index(rest)? }),
            "ZWord" => pair(rest).map(|(j, l)| BasisVectorId::ZWord { j, l }),
            "Z2mWord" => pair(rest).map(|(j, l)| BasisVectorId::Z2mWord { j, l }),
            "FreeWord" => Ok(BasisVectorId::FreeWord { w: word(rest)? }),
            "FreeProdWord" => Ok(BasisVectorId::FreeProdWord { w: word(rest)? }),
            "WeightedCube" => Ok(BasisVectorId::WeightedCube { j: index(rest)? }),
            _ => Err(bad()),
        }
    }
}

fn sgn(x: i64) -> i64 {
    x.signum()
}

impl LengthCocycle {
    fn mismatch(&self, u: &BasisVectorId) -> Error {
        Error::FamilyMismatch { basis: u.to_string(), family: self.family.to_string() }
    }

    /// Checks that `u` is one of this cocycle's basis vectors.
    pub fn validate_basis(&self, u: &BasisVectorId) -> Result<()> {
        let n = self.rank();
        let in_range = |j: usize| j >= 1 && j <= n;
        let ok = match (&self.family, u) {
            (CocycleFamily::Euclidean { .. }, BasisVectorId::Euclidean { j }) => in_range(*j),
            (CocycleFamily::ZnWord { .. }, BasisVectorId::ZWord { j, l }) => in_range(*j) && *l != 0,
            (CocycleFamily::Z2mWord { m, .. }, BasisVectorId::Z2mWord { j, l }) => {
                in_range(*j) && *l >= 1 && *l <= *m as i64
            }
            (CocycleFamily::Free { .. }, BasisVectorId::FreeWord { w }) => {
                !w.is_identity() && self.word_kind().unwrap().contains(w)
            }
            (CocycleFamily::FreeProduct { m, .. }, BasisVectorId::FreeProdWord { w }) => {
                self.word_kind().unwrap().contains(w)
                    && w.last_block().is_some_and(|(_, l)| l >= 1 && l <= *m as i64)
            }
            (CocycleFamily::WeightedCube { .. }, BasisVectorId::WeightedCube { j }) => in_range(*j),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(u))
        }
    }

    /// Index `j` of the subspace `H_j` containing `u`.
    pub fn component(&self, u: &BasisVectorId) -> usize {
        match u {
            BasisVectorId::Euclidean { j }
            | BasisVectorId::ZWord { j, .. }
            | BasisVectorId::Z2mWord { j, .. }
            | BasisVectorId::WeightedCube { j } => *j,
            BasisVectorId::FreeWord { w } | BasisVectorId::FreeProdWord { w } => w.first_generator().unwrap_or(0),
        }
    }

    /// Exact pairing `<beta(g), u>_psi` for the integral families.
    pub fn pairing_exact(&self, g: &GroupElement, u: &BasisVectorId) -> Result<i64> {
        self.validate_basis(u)?;
        let v = match (&self.family, u) {
            (CocycleFamily::Euclidean { .. }, BasisVectorId::Euclidean { j }) => self.tuple(g)[j - 1],
            (CocycleFamily::ZnWord { .. }, BasisVectorId::ZWord { j, l }) => {
                let x = self.tuple(g)[j - 1];
                i64::from(x * l > 0 && x.abs() >= l.abs())
            }
            (CocycleFamily::Z2mWord { m, .. }, BasisVectorId::Z2mWord { j, l }) => {
                let x = self.tuple(g)[j - 1];
                i64::from(*l <= x && x < l + *m as i64)
            }
            (CocycleFamily::Free { .. }, BasisVectorId::FreeWord { w }) => {
                i64::from(leq_free(w, g.as_word().expect("word element")))
            }
            (CocycleFamily::FreeProduct { m, .. }, BasisVectorId::FreeProdWord { w }) => {
                i64::from(derivative_set_member(w, g.as_word().expect("word element"), *m)?)
            }
            _ => return Err(self.unsupported("exact pairing")),
        };
        Ok(v)
    }

    /// Pairing `<beta(g), u>_psi` from the closed forms.
    pub fn pairing(&self, g: &GroupElement, u: &BasisVectorId) -> Result<f64> {
        match (&self.family, u) {
            (CocycleFamily::WeightedCube { alpha }, BasisVectorId::WeightedCube { j }) => {
                self.validate_basis(u)?;
                Ok(if self.tuple(g)[j - 1] != 0 { 2.0 * alpha[j - 1].sqrt() } else { 0.0 })
            }
            _ => self.pairing_exact(g, u).map(|v| v as f64),
        }
    }

    /// `u` written as a finite combination of point masses `delta_h`.
    pub fn expansion(&self, u: &BasisVectorId) -> Result<Vec<(GroupElement, f64)>> {
        self.validate_basis(u)?;
        let n = self.rank();
        let axis = |j: usize, x: i64| {
            let mut t = vec![0i64; n];
            t[j - 1] = x;
            t
        };
        let out = match (&self.family, u) {
            (_, BasisVectorId::Euclidean { j }) => vec![(GroupElement::Tuple(axis(*j, 1)), 1.0)],
            (_, BasisVectorId::ZWord { j, l }) => vec![
                (GroupElement::Tuple(axis(*j, *l)), 1.0),
                (GroupElement::Tuple(axis(*j, l - sgn(*l))), -1.0),
            ],
            (_, BasisVectorId::Z2mWord { j, l }) => vec![
                (GroupElement::Tuple(axis(*j, *l)), 1.0),
                (GroupElement::Tuple(axis(*j, l - 1)), -1.0),
            ],
            (_, BasisVectorId::FreeWord { w }) | (_, BasisVectorId::FreeProdWord { w }) => {
                return self.word_edge(w);
            }
            (CocycleFamily::WeightedCube { alpha }, BasisVectorId::WeightedCube { j }) => {
                // beta({j}) = 1 - W_{j} = 2 delta_{w_j} on supp(mu)
                vec![(GroupElement::Tuple(axis(*j, 1)), 0.5 / alpha[j - 1].sqrt())]
            }
            _ => return Err(self.mismatch(u)),
        };
        Ok(out)
    }

    /// `delta_w - delta_{w^-}` for any nonempty word `w`.
    pub fn word_edge(&self, w: &ReducedWord) -> Result<Vec<(GroupElement, f64)>> {
        let kind = self.word_kind().ok_or_else(|| self.unsupported("word edge"))?;
        let pred = kind.predecessor(w)?;
        Ok(vec![(GroupElement::Word(w.clone()), 1.0), (GroupElement::Word(pred), -1.0)])
    }

    /// Pairing computed from the Gromov form and the expansion of `u`.
    pub fn pairing_via_gromov(&self, g: &GroupElement, u: &BasisVectorId) -> Result<f64> {
        let mut acc = 0.0;
        for (h, c) in self.expansion(u)? {
            acc += c * self.gromov_form(g, &h)?;
        }
        Ok(acc)
    }

    /// Exact version of [`Self::pairing_via_gromov`] using the defining
    /// Gromov expression.
    pub fn pairing_via_gromov_exact(&self, g: &GroupElement, u: &BasisVectorId) -> Result<Rational64> {
        let mut acc = Rational64::from_integer(0);
        for (h, c) in self.expansion(u)? {
            acc += Rational64::from_integer(c as i64) * self.gromov_defining_exact(g, &h)?;
        }
        Ok(acc)
    }

    /// Inner product of two finite combinations of point masses.
    pub fn form_exact(&self, a: &[(GroupElement, f64)], b: &[(GroupElement, f64)]) -> Result<Rational64> {
        let mut acc = Rational64::from_integer(0);
        for (g, x) in a {
            for (h, y) in b {
                if x.fract() != 0.0 || y.fract() != 0.0 {
                    return Err(self.unsupported("exact form with non-integral weights"));
                }
                acc += Rational64::from_integer((x * y) as i64) * self.gromov_defining_exact(g, h)?;
            }
        }
        Ok(acc)
    }

    pub fn form(&self, a: &[(GroupElement, f64)], b: &[(GroupElement, f64)]) -> Result<f64> {
        let mut acc = 0.0;
        for (g, x) in a {
            for (h, y) in b {
                acc += x * y * self.gromov_form(g, h)?;
            }
        }
        Ok(acc)
    }

    /// Gram matrix `<u, u'>_psi` from the bilinear expansion of the Gromov form.
    pub fn gram(&self, basis: &[BasisVectorId]) -> Result<Vec<Vec<f64>>> {
        let expansions: Vec<_> = basis.iter().map(|u| self.expansion(u)).collect::<Result<_>>()?;
        expansions
            .iter()
            .map(|a| expansions.iter().map(|b| self.form(a, b)).collect())
            .collect()
    }

    pub fn gram_exact(&self, basis: &[BasisVectorId]) -> Result<Vec<Vec<Rational64>>> {
        let expansions: Vec<_> = basis.iter().map(|u| self.expansion(u)).collect::<Result<_>>()?;
        expansions
            .iter()
            .map(|a| expansions.iter().map(|b| self.form_exact(a, b)).collect())
            .collect()
    }

    /// Basis vectors with nonzero pairing against `g`. Finite for every family.
    pub fn basis_for_element(&self, g: &GroupElement) -> Result<Vec<BasisVectorId>> {
        let mut out = Vec::new();
        match &self.family {
            CocycleFamily::Euclidean { .. } => {
                for (j, &x) in self.tuple(g).iter().enumerate() {
                    if x != 0 {
                        out.push(BasisVectorId::Euclidean { j: j + 1 });
                    }
                }
            }
            CocycleFamily::ZnWord { .. } => {
                for (j, &x) in self.tuple(g).iter().enumerate() {
                    for l in 1..=x.abs() {
                        out.push(BasisVectorId::ZWord { j: j + 1, l: sgn(x) * l });
                    }
                }
            }
            CocycleFamily::Z2mWord { m, .. } => {
                let m = *m as i64;
                for (j, &x) in self.tuple(g).iter().enumerate() {
                    for l in (x - m + 1).max(1)..=x.min(m) {
                        out.push(BasisVectorId::Z2mWord { j: j + 1, l });
                    }
                }
            }
            CocycleFamily::Free { .. } => {
                let w = g.as_word().expect("word element");
                for (k, &(gen, t)) in w.blocks().iter().enumerate() {
                    for l in 1..=t.abs() {
                        let mut blocks = w.blocks()[..k].to_vec();
                        blocks.push((gen, sgn(t) * l));
                        out.push(BasisVectorId::FreeWord { w: ReducedWord::try_from(blocks)? });
                    }
                }
            }
            CocycleFamily::FreeProduct { m, .. } => {
                let m = *m as i64;
                let w = g.as_word().expect("word element");
                for (k, &(gen, t)) in w.blocks().iter().enumerate() {
                    for l in (t - m + 1).max(1)..=t.min(m) {
                        let mut blocks = w.blocks()[..k].to_vec();
                        blocks.push((gen, l));
                        out.push(BasisVectorId::FreeProdWord { w: ReducedWord::try_from(blocks)? });
                    }
                }
            }
            CocycleFamily::WeightedCube { .. } => {
                for (j, &x) in self.tuple(g).iter().enumerate() {
                    if x != 0 {
                        out.push(BasisVectorId::WeightedCube { j: j + 1 });
                    }
                }
            }
            CocycleFamily::OddTorus { .. } => return Err(self.unsupported("orthonormal basis")),
        }
        Ok(out)
    }

    /// Basis vectors relevant to a coefficient support, sorted.
    pub fn basis_for_support<'a>(
        &self,
        support: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<BTreeSet<BasisVectorId>> {
        let mut out = BTreeSet::new();
        for g in support {
            out.extend(self.basis_for_element(g)?);
        }
        Ok(out)
    }

    /// A finite slice of the basis: all of it for the finite-dimensional
    /// families, and the vectors of "size" at most `max_size` (|l| or word
    /// length) for the infinite ones.
    pub fn basis_slice(&self, max_size: u64) -> Result<Vec<BasisVectorId>> {
        let n = self.rank();
        let out = match &self.family {
            CocycleFamily::Euclidean { .. } => (1..=n).map(|j| BasisVectorId::Euclidean { j }).collect(),
            CocycleFamily::ZnWord { .. } => (1..=n)
                .flat_map(|j| (1..=max_size as i64).flat_map(move |l| [BasisVectorId::ZWord { j, l }, BasisVectorId::ZWord { j, l: -l }]))
                .collect(),
            CocycleFamily::Z2mWord { m, .. } => (1..=n)
                .flat_map(|j| (1..=*m as i64).map(move |l| BasisVectorId::Z2mWord { j, l }))
                .collect(),
            CocycleFamily::Free { .. } => self
                .word_kind()
                .unwrap()
                .words_up_to(max_size)
                .into_iter()
                .filter(|w| !w.is_identity())
                .map(|w| BasisVectorId::FreeWord { w })
                .collect(),
            CocycleFamily::FreeProduct { m, .. } => self
                .word_kind()
                .unwrap()
                .words_up_to(max_size)
                .into_iter()
                .filter(|w| w.last_block().is_some_and(|(_, l)| l <= *m as i64))
                .map(|w| BasisVectorId::FreeProdWord { w })
                .collect(),
            CocycleFamily::WeightedCube { .. } => (1..=n).map(|j| BasisVectorId::WeightedCube { j }).collect(),
            CocycleFamily::OddTorus { .. } => return Err(self.unsupported("orthonormal basis")),
        };
        Ok(out)
    }

    /// `sum_u <beta(g), u>^2` over the finitely many nonzero terms.
    pub fn completeness_sum(&self, g: &GroupElement) -> Result<f64> {
        let mut acc = 0.0;
        for u in self.basis_for_element(g)? {
            acc += self.pairing(g, &u)?.powi(2);
        }
        Ok(acc)
    }
}
