//! Reduced words in the free group `F_n` and in the free product `Z_{2m}^{*n}`.
//!
//! A word is stored as a list of blocks `(generator, exponent)` with
//! generators numbered from 1. Adjacent blocks always carry distinct
//! generators. In `F_n` exponents are nonzero integers; in `Z_{2m}^{*n}`
//! they lie in `1..=2m-1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the two free constructions a word lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordKind {
    /// The free group on `rank` generators.
    Free { rank: usize },
    /// The free product of `rank` copies of `Z_modulus` (modulus even).
    FreeProduct { rank: usize, modulus: u32 },
}

/// A word in reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, i64)>", into = "Vec<(usize, i64)>")]
pub struct ReducedWord {
    blocks: Vec<(usize, i64)>,
}

impl TryFrom<Vec<(usize, i64)>> for ReducedWord {
    type Error = Error;

    fn try_from(blocks: Vec<(usize, i64)>) -> Result<Self> {
        for (k, &(gen, exp)) in blocks.iter().enumerate() {
            if gen == 0 {
                return Err(Error::Parse("generators are numbered from 1".into()));
            }
            if exp == 0 {
                return Err(Error::Parse(format!("zero exponent in block {}", k + 1)));
            }
            if k > 0 && blocks[k - 1].0 == gen {
                return Err(Error::Parse(format!(
                    "blocks {} and {} share generator {gen}; word is not reduced",
                    k,
                    k + 1
                )));
            }
        }
        Ok(ReducedWord { blocks })
    }
}

impl From<ReducedWord> for Vec<(usize, i64)> {
    fn from(w: ReducedWord) -> Self {
        w.blocks
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "e");
        }
        for (k, (gen, exp)) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *exp == 1 {
                write!(f, "g{gen}")?;
            } else {
                write!(f, "g{gen}^{exp}")?;
            }
        }
        Ok(())
    }
}

impl ReducedWord {
    /// The empty word `e`.
    pub fn identity() -> Self {
        ReducedWord { blocks: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[(usize, i64)] {
        &self.blocks
    }

    /// Number of blocks (syllables), not the word length.
    pub fn syllables(&self) -> usize {
        self.blocks.len()
    }

    pub fn first_generator(&self) -> Option<usize> {
        self.blocks.first().map(|b| b.0)
    }

    pub fn last_block(&self) -> Option<(usize, i64)> {
        self.blocks.last().copied()
    }

    /// Largest generator index used, 0 for `e`.
    pub fn max_generator(&self) -> usize {
        self.blocks.iter().map(|b| b.0).max().unwrap_or(0)
    }

    /// Prefix made of the first `count` blocks.
    pub fn prefix(&self, count: usize) -> ReducedWord {
        ReducedWord {
            blocks: self.blocks[..count.min(self.blocks.len())].to_vec(),
        }
    }

    /// Append a block whose generator differs from the current last one.
    fn pushed(&self, gen: usize, exp: i64) -> ReducedWord {
        debug_assert!(self.blocks.last().is_none_or(|b| b.0 != gen));
        let mut blocks = self.blocks.clone();
        blocks.push((gen, exp));
        ReducedWord { blocks }
    }
}

impl WordKind {
    pub fn rank(&self) -> usize {
        match *self {
            WordKind::Free { rank } | WordKind::FreeProduct { rank, .. } => rank,
        }
    }

    pub fn modulus(&self) -> Option<u32> {
        match *self {
            WordKind::Free { .. } => None,
            WordKind::FreeProduct { modulus, .. } => Some(modulus),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WordKind::Free { rank } if rank >= 1 => Ok(()),
            WordKind::FreeProduct { rank, modulus } if rank >= 1 && modulus >= 2 && modulus % 2 == 0 => Ok(()),
            _ => Err(Error::InvalidGroup(format!("{self:?}"))),
        }
    }

    /// Canonical representative of an exponent, `None` when it vanishes.
    fn normalize_exponent(&self, exp: i64) -> Option<i64> {
        let e = match self.modulus() {
            None => exp,
            Some(q) => exp.rem_euclid(q as i64),
        };
        (e != 0).then_some(e)
    }

    /// Reduce an arbitrary list of blocks: merge equal neighbouring
    /// generators, reduce exponents and drop trivial blocks.
    pub fn reduce(&self, raw: &[(usize, i64)]) -> Result<ReducedWord> {
        let rank = self.rank();
        let mut stack: Vec<(usize, i64)> = Vec::with_capacity(raw.len());
        for &(gen, exp) in raw {
            if gen == 0 || gen > rank {
                return Err(Error::IndexOutOfRange { index: gen, rank });
            }
            let Some(exp) = self.normalize_exponent(exp) else {
                continue;
            };
            match stack.last_mut() {
                Some(top) if top.0 == gen => match self.normalize_exponent(top.1 + exp) {
                    Some(merged) => top.1 = merged,
                    None => {
                        stack.pop();
                    }
                },
                _ => stack.push((gen, exp)),
            }
        }
        Ok(ReducedWord { blocks: stack })
    }

    /// Checks that `w` is a reduced word of this kind.
    pub fn contains(&self, w: &ReducedWord) -> bool {
        let rank = self.rank();
        w.blocks.iter().enumerate().all(|(k, &(gen, exp))| {
            let exp_ok = match self.modulus() {
                None => exp != 0,
                Some(q) => exp >= 1 && exp < q as i64,
            };
            gen >= 1 && gen <= rank && exp_ok && (k == 0 || w.blocks[k - 1].0 != gen)
        })
    }

    /// The generator `g_gen^exp` as a reduced word.
    pub fn generator_power(&self, gen: usize, exp: i64) -> Result<ReducedWord> {
        self.reduce(&[(gen, exp)])
    }

    pub fn inverse(&self, w: &ReducedWord) -> ReducedWord {
        let blocks = w
            .blocks
            .iter()
            .rev()
            .map(|&(gen, exp)| match self.modulus() {
                None => (gen, -exp),
                Some(q) => (gen, q as i64 - exp),
            })
            .collect();
        ReducedWord { blocks }
    }

    pub fn mul(&self, a: &ReducedWord, b: &ReducedWord) -> ReducedWord {
        let mut raw = a.blocks.clone();
        raw.extend_from_slice(&b.blocks);
        // Both inputs are valid words of this kind, so reduction cannot fail.
        self.reduce(&raw).expect("product of valid words")
    }

    /// Length of a single syllable `g^exp`.
    pub fn syllable_length(&self, exp: i64) -> u64 {
        match self.modulus() {
            None => exp.unsigned_abs(),
            Some(q) => {
                let e = exp.rem_euclid(q as i64);
                e.min(q as i64 - e) as u64
            }
        }
    }

    /// Word length: `sum |l_k|` in `F_n`, `sum min{l_k, 2m - l_k}` in `Z_{2m}^{*n}`.
    pub fn length(&self, w: &ReducedWord) -> u64 {
        w.blocks.iter().map(|&(_, exp)| self.syllable_length(exp)).sum()
    }

    /// Predecessor `w^-`: the last exponent moves one step toward zero
    /// (`F_n`) or is decremented by one (`Z_{2m}^{*n}`).
    pub fn predecessor(&self, w: &ReducedWord) -> Result<ReducedWord> {
        let (gen, exp) = w.last_block().ok_or(Error::EmptyWord)?;
        let next = match self.modulus() {
            None => exp - exp.signum(),
            Some(_) => exp - 1,
        };
        let mut blocks = w.blocks.clone();
        if next == 0 {
            blocks.pop();
        } else {
            *blocks.last_mut().unwrap() = (gen, next);
        }
        Ok(ReducedWord { blocks })
    }

    /// Enumerate every reduced word of length at most `max_len`.
    pub fn words_up_to(&self, max_len: u64) -> Vec<ReducedWord> {
        let rank = self.rank();
        let syllables: Vec<i64> = match self.modulus() {
            None => (1..=max_len as i64).flat_map(|e| [e, -e]).collect(),
            Some(q) => (1..q as i64).collect(),
        };
        let mut out = vec![ReducedWord::identity()];
        let mut frontier = vec![(ReducedWord::identity(), 0u64)];
        while let Some((w, len)) = frontier.pop() {
            let last = w.last_block().map(|b| b.0);
            for gen in 1..=rank {
                if Some(gen) == last {
                    continue;
                }
                for &exp in &syllables {
                    let l = len + self.syllable_length(exp);
                    if l <= max_len {
                        let next = w.pushed(gen, exp);
                        out.push(next.clone());
                        frontier.push((next, l));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Initial-subchain order on `F_n`: `w1 <= w2` when `w1` is obtained from a
/// prefix of `w2` by shrinking its last block toward zero. The empty word is
/// below everything.
pub fn leq_free(w1: &ReducedWord, w2: &ReducedWord) -> bool {
    let (r, s) = (w1.blocks.len(), w2.blocks.len());
    if r == 0 {
        return true;
    }
    if r > s || w1.blocks[..r - 1] != w2.blocks[..r - 1] {
        return false;
    }
    let (gi, l) = w1.blocks[r - 1];
    let (gj, t) = w2.blocks[r - 1];
    gi == gj && l * t > 0 && l.abs() <= t.abs()
}

/// Longest word that is an initial chain of both arguments (`F_n`).
pub fn meet(w1: &ReducedWord, w2: &ReducedWord) -> ReducedWord {
    let mut blocks = Vec::new();
    for (&(ga, a), &(gb, b)) in w1.blocks.iter().zip(&w2.blocks) {
        if ga != gb || a * b <= 0 {
            break;
        }
        if a == b {
            blocks.push((ga, a));
            continue;
        }
        blocks.push((ga, a.signum() * a.abs().min(b.abs())));
        break;
    }
    ReducedWord { blocks }
}

/// Number of leading blocks that agree exactly in both words.
pub fn common_block_prefix(w1: &ReducedWord, w2: &ReducedWord) -> usize {
    w1.blocks
        .iter()
        .zip(&w2.blocks)
        .take_while(|(a, b)| a == b)
        .count()
}

/// Membership `w' in W(w)` for the derivative sets of `Z_{2m}^{*n}`.
///
/// Requires `w != e` with last exponent in `1..=m`. The test is: `w` has at
/// most as many blocks as `w'`, generators agree on the first `r` blocks,
/// exponents agree on the first `r - 1`, and `l_r <= t_r <= l_r + m - 1`.
pub fn derivative_set_member(w: &ReducedWord, w_prime: &ReducedWord, m: u32) -> Result<bool> {
    let (_, last) = w.last_block().ok_or(Error::EmptyWord)?;
    if last < 1 || last > m as i64 {
        return Err(Error::Precondition(format!(
            "last exponent {last} of {w} must lie in 1..={m}"
        )));
    }
    let (r, s) = (w.blocks.len(), w_prime.blocks.len());
    if r > s || w.blocks[..r - 1] != w_prime.blocks[..r - 1] {
        return Ok(false);
    }
    let (gi, l) = w.blocks[r - 1];
    let (gj, t) = w_prime.blocks[r - 1];
    Ok(gi == gj && l <= t && t < l + m as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: WordKind = WordKind::Free { rank: 2 };
    const F3: WordKind = WordKind::Free { rank: 3 };
    const Z4_2: WordKind = WordKind::FreeProduct { rank: 2, modulus: 4 };

    fn w(kind: WordKind, raw: &[(usize, i64)]) -> ReducedWord {
        kind.reduce(raw).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w(F2, &[(1, 2), (1, -2)]).is_identity());
        assert_eq!(w(F2, &[(1, 1), (2, 0), (1, 1)]).blocks(), &[(1, 2)]);
        assert_eq!(w(Z4_2, &[(1, 3), (1, 3)]).blocks(), &[(1, 2)]);
        assert_eq!(
            F2.reduce(&[(3, 1)]),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        );
        assert!(w(F2, &[(1, 1), (2, 1), (2, -1), (1, -1)]).is_identity());
    }

    #[test]
    fn length_examples() {
        assert_eq!(F2.length(&ReducedWord::identity()), 0);
        assert_eq!(F2.length(&w(F2, &[(1, 2), (2, -1)])), 3);
        assert_eq!(Z4_2.length(&w(Z4_2, &[(1, 3)])), 1);
    }

    #[test]
    fn order_examples() {
        assert!(leq_free(&w(F2, &[(1, 2)]), &w(F2, &[(1, 3)])));
        assert!(!leq_free(&w(F2, &[(1, 1)]), &w(F2, &[(2, 1), (1, 1)])));
        assert!(!leq_free(&w(F2, &[(1, -1)]), &w(F2, &[(1, 1)])));
        assert!(leq_free(&ReducedWord::identity(), &w(F2, &[(2, -3)])));
    }

    #[test]
    fn predecessor_examples() {
        assert!(F3.predecessor(&w(F3, &[(1, 1)])).unwrap().is_identity());
        assert_eq!(
            F2.predecessor(&w(F2, &[(1, 2), (2, -3)])).unwrap().blocks(),
            &[(1, 2), (2, -2)]
        );
        assert_eq!(
            Z4_2.predecessor(&w(Z4_2, &[(2, 1), (1, 1)])).unwrap().blocks(),
            &[(2, 1)]
        );
        assert_eq!(F2.predecessor(&ReducedWord::identity()), Err(Error::EmptyWord));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&w(F2, &[(1, 2), (2, 1)]), &w(F2, &[(1, 3)])).blocks(), &[(1, 2)]);
        assert!(meet(&w(F2, &[(1, 1)]), &w(F2, &[(2, 1)])).is_identity());
        assert_eq!(
            meet(&w(F2, &[(1, 1), (2, 1)]), &w(F2, &[(1, 1), (2, -1)])).blocks(),
            &[(1, 1)]
        );
    }

    #[test]
    fn derivative_set_examples() {
        let g1 = w(Z4_2, &[(1, 1)]);
        assert!(derivative_set_member(&g1, &w(Z4_2, &[(1, 2)]), 2).unwrap());
        assert!(!derivative_set_member(&g1, &w(Z4_2, &[(1, 3)]), 2).unwrap());
        assert!(!derivative_set_member(&g1, &w(Z4_2, &[(2, 1), (1, 1)]), 2).unwrap());
        assert!(derivative_set_member(&w(Z4_2, &[(1, 3)]), &g1, 2).is_err());
        assert!(derivative_set_member(&ReducedWord::identity(), &g1, 2).is_err());
    }

    #[test]
    fn inverse_and_product() {
        let a = w(F2, &[(1, 1), (2, 1)]);
        assert_eq!(F2.inverse(&a).blocks(), &[(2, -1), (1, -1)]);
        assert!(F2.mul(&a, &F2.inverse(&a)).is_identity());
        let b = w(Z4_2, &[(1, 1), (2, 3)]);
        assert_eq!(Z4_2.inverse(&b).blocks(), &[(2, 1), (1, 3)]);
        assert!(Z4_2.mul(&Z4_2.inverse(&b), &b).is_identity());
    }

    #[test]
    fn enumeration_counts() {
        // F_2 ball sizes: 1, 4, 12, 36
        assert_eq!(F2.words_up_to(1).len(), 5);
        assert_eq!(F2.words_up_to(2).len(), 17);
        assert_eq!(F2.words_up_to(3).len(), 53);
        for x in Z4_2.words_up_to(3) {
            assert!(Z4_2.contains(&x));
            assert!(Z4_2.length(&x) <= 3);
        }
    }

    #[test]
    fn partial_order_exhaustive() {
        for kind in [F2, F3] {
            let words = kind.words_up_to(if kind.rank() == 3 { 3 } else { 4 });
            for a in &words {
                assert!(leq_free(a, a));
                for b in &words {
                    if leq_free(a, b) {
                        assert!(kind.length(a) <= kind.length(b));
                        if leq_free(b, a) {
                            assert_eq!(a, b);
                        }
                        for c in words.iter().filter(|c| leq_free(b, c)) {
                            assert!(leq_free(a, c), "{a} <= {b} <= {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn predecessor_chain_reaches_identity() {
        for x in F3.words_up_to(4) {
            let mut cur = x.clone();
            let mut steps = 0;
            while !cur.is_identity() {
                let next = F3.predecessor(&cur).unwrap();
                assert_eq!(F3.length(&next) + 1, F3.length(&cur));
                cur = next;
                steps += 1;
            }
            assert_eq!(steps, F3.length(&x));
        }
    }

    #[test]
    fn meet_is_gromov_product() {
        let words = F2.words_up_to(4);
        for a in &words {
            for b in &words {
                let m = meet(a, b);
                assert!(leq_free(&m, a) && leq_free(&m, b));
                let lhs = 2 * F2.length(&m);
                let rhs = F2.length(a) + F2.length(b) - F2.length(&F2.mul(&F2.inverse(a), b));
                assert_eq!(lhs, rhs, "{a} ^ {b}");
            }
        }
    }

    #[test]
    fn serde_format() {
        let x = w(F2, &[(1, 2), (2, -1)]);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[[1,2],[2,-1]]");
        let back: ReducedWord = serde_json::from_str("[[1,2],[2,-1]]").unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<ReducedWord>("[[1,2],[1,1]]").is_err());
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn raw_blocks() -> impl Strategy<Value = Vec<(usize, i64)>> {
        prop::collection::vec((1usize..=3, -4i64..=4), 0..10)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in raw_blocks(), q in prop::sample::select(vec![0u32, 2, 4, 6])) {
            let kind = if q == 0 { WordKind::Free { rank: 3 } } else { WordKind::FreeProduct { rank: 3, modulus: q } };
            let once = kind.reduce(&raw).unwrap();
            prop_assert!(kind.contains(&once));
            prop_assert_eq!(kind.reduce(once.blocks()).unwrap(), once.clone());
            prop_assert_eq!(kind.length(&kind.inverse(&once)), kind.length(&once));
        }
    }
}
