use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::GroupAlgebraElement;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::norms::MatrixOperand;
use crate::words::ReducedWord;

/// Word length bound for the dense ensembles on free groups.
const FREE_BALL: u64 = 3;

/// Random input families. Every sampled element is mean-zero and nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Ensemble {
    /// Gaussian coefficients on the whole finite group, the torus box or
    /// the ball of words of length at most 3.
    Gaussian,
    /// Gaussian coefficients on `size` random elements.
    Sparse { size: usize },
    /// Gaussian coefficients on elements with at most `degree` nonzero
    /// coordinates (word length at most `degree` for free groups).
    Chaos { degree: usize },
    /// Gaussian coefficients on the generators and their inverses.
    Linear,
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ensemble::Gaussian => write!(f, "gaussian"),
            Ensemble::Sparse { size } => write!(f, "sparse:{size}"),
            Ensemble::Chaos { degree } => write!(f, "chaos:{degree}"),
            Ensemble::Linear => write!(f, "linear"),
        }
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    /// `gaussian`, `sparse:<size>`, `chaos:<degree>` or `linear`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown ensemble {s:?} (gaussian, sparse:<size>, chaos:<degree>, linear)"));
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (name, arg) {
            ("gaussian", None) => Ok(Ensemble::Gaussian),
            ("linear", None) => Ok(Ensemble::Linear),
            ("sparse", Some(size)) if size > 0 => Ok(Ensemble::Sparse { size }),
            ("chaos", Some(degree)) if degree > 0 => Ok(Ensemble::Chaos { degree }),
            _ => Err(bad()),
        }
    }
}

impl From<Ensemble> for String {
    fn from(e: Ensemble) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for Ensemble {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn degree(g: &GroupElement) -> usize {
    match g {
        GroupElement::Tuple(t) => t.iter().filter(|&&x| x != 0).count(),
        GroupElement::Word(w) => w.blocks().iter().map(|(_, e)| e.unsigned_abs() as usize).sum(),
    }
}

fn is_generator(group: &GroupDescriptor, g: &GroupElement) -> bool {
    match (group, g) {
        (GroupDescriptor::FiniteAbelian { moduli }, GroupElement::Tuple(t)) => {
            degree(g) == 1 && t.iter().zip(moduli).all(|(&x, &m)| x == 0 || x == 1 || x == m as i64 - 1)
        }
        (_, GroupElement::Tuple(t)) => degree(g) == 1 && t.iter().all(|x| x.abs() <= 1),
        (_, GroupElement::Word(w)) => {
            let q = group.word_kind().and_then(|k| k.modulus()).map(|q| q as i64);
            w.syllables() == 1 && w.blocks().iter().all(|&(_, e)| e.abs() == 1 || Some(e) == q.map(|q| q - 1))
        }
    }
}

/// Candidate support of the dense ensembles.
fn domain(group: &GroupDescriptor) -> Result<Vec<GroupElement>> {
    match group {
        GroupDescriptor::FiniteAbelian { .. } | GroupDescriptor::Torus { .. } => group.box_points(),
        _ => Ok(group.word_kind().unwrap().words_up_to(FREE_BALL).into_iter().map(GroupElement::Word).collect()),
    }
}

fn random_group_element(group: &GroupDescriptor, rng: &mut impl Rng) -> GroupElement {
    match group {
        GroupDescriptor::FiniteAbelian { moduli } => {
            GroupElement::Tuple(moduli.iter().map(|&m| rng.random_range(0..m as i64)).collect())
        }
        GroupDescriptor::Torus { rank, bound } => {
            let b = *bound as i64;
            GroupElement::Tuple((0..*rank).map(|_| rng.random_range(-b..=b)).collect())
        }
        GroupDescriptor::Free { rank } | GroupDescriptor::FreeProduct { rank, .. } => {
            let kind = group.word_kind().unwrap();
            let q = kind.modulus().map(|q| q as i64);
            let len = rng.random_range(1..=4usize);
            let raw: Vec<(usize, i64)> = (0..len)
                .map(|_| {
                    let e = match q {
                        Some(q) => rng.random_range(1..q),
                        None if rng.random_bool(0.5) => 1,
                        None => -1,
                    };
                    (rng.random_range(1..=*rank), e)
                })
                .collect();
            GroupElement::Word(kind.reduce(&raw).unwrap_or_else(|_| ReducedWord::identity()))
        }
    }
}

/// A random nonzero mean-zero element of the group algebra.
pub fn sample_element(group: &GroupDescriptor, ensemble: Ensemble, rng: &mut impl Rng) -> Result<GroupAlgebraElement> {
    group.validate()?;
    let e = group.identity();
    let support: Vec<GroupElement> = match ensemble {
        Ensemble::Sparse { size } => {
            let mut picked = std::collections::BTreeSet::new();
            let capacity = group.order().map(|o| o - 1).unwrap_or(usize::MAX);
            let mut attempts = 0;
            while picked.len() < size.min(capacity) && attempts < 100 * size {
                attempts += 1;
                let g = random_group_element(group, rng);
                if g != e {
                    picked.insert(g);
                }
            }
            picked.into_iter().collect()
        }
        Ensemble::Gaussian => domain(group)?,
        Ensemble::Chaos { degree: d } => domain(group)?.into_iter().filter(|g| degree(g) <= d).collect(),
        Ensemble::Linear => domain(group)?.into_iter().filter(|g| is_generator(group, g)).collect(),
    };
    let support: Vec<GroupElement> = support.into_iter().filter(|g| *g != e).collect();
    if support.is_empty() {
        return Err(Error::InvalidParameter(format!("ensemble {ensemble} has empty support on {group}")));
    }
    let coeffs: Vec<(GroupElement, Complex64)> = support.into_iter().map(|g| (g, gaussian(rng))).collect();
    GroupAlgebraElement::from_coeffs(group.clone(), coeffs)
}

/// `n` complex Gaussian scalars; `sparse:s` keeps `s` of them.
pub fn random_vector(n: usize, ensemble: Ensemble, rng: &mut impl Rng) -> Result<Vec<Complex64>> {
    let mut a: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    match ensemble {
        Ensemble::Gaussian | Ensemble::Linear => {}
        Ensemble::Sparse { size } => {
            let keep: Vec<usize> = sample(rng, n, size.min(n)).into_iter().collect();
            for (j, x) in a.iter_mut().enumerate() {
                if !keep.contains(&j) {
                    *x = Complex64::default();
                }
            }
        }
        Ensemble::Chaos { .. } => {
            return Err(Error::InvalidParameter("chaos ensembles apply to group algebra inputs only".into()))
        }
    }
    Ok(a)
}

/// `n` complex Gaussian `d x d` matrices.
pub fn random_matrices(n: usize, d: usize, rng: &mut impl Rng) -> Vec<MatrixOperand> {
    (0..n)
        .map(|_| MatrixOperand::new(DMatrix::from_fn(d, d, |_, _| gaussian(rng))).expect("finite entries"))
        .collect()
}
