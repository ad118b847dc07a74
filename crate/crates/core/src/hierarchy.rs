//! Finite levels of the difference hierarchy over the open sets of a finite
//! poset.
//!
//! A set sits in `Sigma_n` exactly when it has no alternating chain of `n + 1`
//! points starting inside it. [`classify`] reads the level off the longest
//! such chains; [`oracle_level`] searches increasing open sequences directly
//! and shares no code with it beyond the topology primitives.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::poset::FinitePoset;
use crate::subset::{bit_indices, SubsetMask};
use crate::{Error, Result};

/// `D_n` of an increasing sequence of `n` open sets: the union of the blocks
/// `A_b \ A_{b-1}` whose index parity differs from the parity of `n`.
pub fn d_n(space: &FinitePoset, opens: &[SubsetMask]) -> Result<SubsetMask> {
    let mut prev = 0u64;
    let mut out = 0u64;
    let n = opens.len();
    for (i, a) in opens.iter().enumerate() {
        a.check_space(space)?;
        if !space.is_open_bits(a.bits()) {
            return Err(Error::NotOpen(i));
        }
        if prev & !a.bits() != 0 {
            return Err(Error::NotIncreasing(i));
        }
        if i % 2 != n % 2 {
            out |= a.bits() & !prev;
        }
        prev = a.bits();
    }
    Ok(SubsetMask::from_bits(space, out))
}

/// Exact position of a set in the finite difference hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "level")]
pub enum LevelLabel {
    ProperSigma(usize),
    ProperPi(usize),
    ProperDelta(usize),
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelLabel::ProperSigma(n) => write!(f, "ProperSigma({n})"),
            LevelLabel::ProperPi(n) => write!(f, "ProperPi({n})"),
            LevelLabel::ProperDelta(n) => write!(f, "ProperDelta({n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DiffLevel {
    /// Least `n` with the set in `Sigma_n`.
    pub sigma_rank: usize,
    /// Least `n` with the set in `Pi_n`.
    pub pi_rank: usize,
    pub label: LevelLabel,
}

impl DiffLevel {
    pub fn from_ranks(sigma_rank: usize, pi_rank: usize) -> Self {
        let label = match sigma_rank.cmp(&pi_rank) {
            std::cmp::Ordering::Less => LevelLabel::ProperSigma(sigma_rank),
            std::cmp::Ordering::Greater => LevelLabel::ProperPi(pi_rank),
            std::cmp::Ordering::Equal => LevelLabel::ProperDelta(sigma_rank),
        };
        DiffLevel {
            sigma_rank,
            pi_rank,
            label,
        }
    }

    /// Pointclass inclusion order. Reductions never go up in it: if
    /// `A <=_W B` then `level(A).le(&level(B))`.
    pub fn le(&self, other: &DiffLevel) -> bool {
        self.sigma_rank <= other.sigma_rank && self.pi_rank <= other.pi_rank
    }

    pub fn dual(&self) -> DiffLevel {
        DiffLevel::from_ranks(self.pi_rank, self.sigma_rank)
    }
}

/// Strictly increasing points alternating in and out of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingChain {
    pub points: Vec<usize>,
    pub starts_in: bool,
}

impl AlternatingChain {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_valid_for(&self, space: &FinitePoset, a: &SubsetMask) -> bool {
        let alternates = self.points.windows(2).all(|w| {
            space.lt(w[0], w[1]) && a.contains(w[0]) != a.contains(w[1])
        });
        let start_ok = self.points.first().map_or(true, |&p| a.contains(p) == self.starts_in);
        alternates && start_ok
    }
}

/// A longest alternating chain for `a` whose first point is in `a` iff
/// `starts_in`. Empty when no point qualifies.
///
/// `longest[x]` is the longest alternating chain starting at `x`, filled over
/// the reversed linear extension. Ties go to the smallest index.
pub fn longest_alternating_chain(
    space: &FinitePoset,
    a: &SubsetMask,
    starts_in: bool,
) -> Result<AlternatingChain> {
    a.check_space(space)?;
    let n = space.len();
    let mut longest = vec![0usize; n];
    let mut next = vec![usize::MAX; n];
    for &x in space.linear_extension().iter().rev() {
        let inside = a.contains(x);
        let mut best = 0;
        let above = space.up_bits(x) & !(1u64 << x);
        for y in bit_indices(above) {
            if a.contains(y) != inside && longest[y] > best {
                best = longest[y];
                next[x] = y;
            }
        }
        longest[x] = best + 1;
    }
    let start = (0..n)
        .filter(|&x| a.contains(x) == starts_in)
        .fold(None::<usize>, |acc, x| match acc {
            Some(b) if longest[b] >= longest[x] => Some(b),
            _ => Some(x),
        });
    let mut points = Vec::new();
    let mut cur = start;
    while let Some(x) = cur {
        points.push(x);
        cur = (next[x] != usize::MAX).then_some(next[x]);
    }
    Ok(AlternatingChain { points, starts_in })
}

/// Level of `a`, with witness chains for both ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub level: DiffLevel,
    /// Longest chain starting inside `a`; its length is `sigma_rank`.
    pub chain_in: AlternatingChain,
    /// Longest chain starting outside `a`; its length is `pi_rank`.
    pub chain_out: AlternatingChain,
}

pub fn classify_with_witnesses(space: &FinitePoset, a: &SubsetMask) -> Result<Classification> {
    let chain_in = longest_alternating_chain(space, a, true)?;
    let chain_out = longest_alternating_chain(space, a, false)?;
    Ok(Classification {
        level: DiffLevel::from_ranks(chain_in.len(), chain_out.len()),
        chain_in,
        chain_out,
    })
}

pub fn classify(space: &FinitePoset, a: &SubsetMask) -> Result<DiffLevel> {
    Ok(classify_with_witnesses(space, a)?.level)
}

/// Least `n <= n_max` with `a` in `Sigma_n`, found by exhaustive search over
/// increasing open sequences, together with a witness sequence.
pub fn oracle_sigma_witness(
    space: &FinitePoset,
    a: &SubsetMask,
    n_max: usize,
) -> Result<Option<(usize, Vec<SubsetMask>)>> {
    a.check_space(space)?;
    let opens: Vec<u64> = space.enumerate_opens().map(|m| m.bits()).collect();
    for n in 0..=n_max {
        if let Some(seq) = sigma_sequence(&opens, a.bits(), n) {
            let seq = seq.into_iter().map(|b| SubsetMask::from_bits(space, b)).collect();
            return Ok(Some((n, seq)));
        }
    }
    Ok(None)
}

/// Searches `A_0 ⊆ ... ⊆ A_{n-1}` with `D_n(A) = target`.
///
/// Every block `A_b \ A_{b-1}` must lie inside the target when it is
/// included (parity of `b` differs from `n`) and outside it otherwise, and
/// the target must end up covered by `A_{n-1}`. Dead `(position, open)`
/// states are remembered.
fn sigma_sequence(opens: &[u64], target: u64, n: usize) -> Option<Vec<u64>> {
    if n == 0 {
        return (target == 0).then(Vec::new);
    }
    let mut seq = Vec::with_capacity(n);
    let mut dead = HashSet::new();
    extend_sequence(opens, target, n, 0, 0, &mut seq, &mut dead).then_some(seq)
}

fn extend_sequence(
    opens: &[u64],
    target: u64,
    n: usize,
    pos: usize,
    prev: u64,
    seq: &mut Vec<u64>,
    dead: &mut HashSet<(usize, u64)>,
) -> bool {
    if pos == n {
        return target & !prev == 0;
    }
    if dead.contains(&(pos, prev)) {
        return false;
    }
    let included = pos % 2 != n % 2;
    for &open in opens {
        if prev & !open != 0 {
            continue;
        }
        let block = open & !prev;
        let fits = if included {
            block & !target == 0
        } else {
            block & target == 0
        };
        if !fits {
            continue;
        }
        seq.push(open);
        if extend_sequence(opens, target, n, pos + 1, open, seq, dead) {
            return true;
        }
        seq.pop();
    }
    dead.insert((pos, prev));
    false
}

/// Brute-force level: least `n` with `a` in `Sigma_n` and least `n` with the
/// complement in `Sigma_n`, each searched up to `n_max`.
pub fn oracle_level(space: &FinitePoset, a: &SubsetMask, n_max: usize) -> Result<DiffLevel> {
    let sigma = oracle_sigma_witness(space, a, n_max)?;
    let pi = oracle_sigma_witness(space, &a.complement(), n_max)?;
    match (sigma, pi) {
        (Some((s, _)), Some((p, _))) => Ok(DiffLevel::from_ranks(s, p)),
        _ => Err(Error::CapExceeded {
            what: "difference level",
            got: n_max + 1,
            cap: n_max,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{antichain, chain, fan};

    fn set(x: &FinitePoset, idx: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(x, idx.iter().copied()).unwrap()
    }

    /// x0 < x1, y0 < y1, labelled 0..4 in that order.
    fn two_chains() -> FinitePoset {
        FinitePoset::from_covers(&["x0", "x1", "y0", "y1"], &[("x0", "x1"), ("y0", "y1")]).unwrap()
    }

    #[test]
    fn d_n_examples() {
        let l3 = chain(3);
        let a0 = set(&l3, &[2]);
        let a1 = set(&l3, &[1, 2]);
        assert_eq!(d_n(&l3, &[a0]).unwrap(), a0);
        assert_eq!(d_n(&l3, &[a0, a1]).unwrap(), set(&l3, &[1]));

        // n = 4 keeps (A1 \ A0) ∪ (A3 \ A2)
        let l4 = chain(4);
        let seq: Vec<SubsetMask> = [vec![3], vec![2, 3], vec![1, 2, 3], vec![0, 1, 2, 3]]
            .iter()
            .map(|v| set(&l4, v))
            .collect();
        assert_eq!(d_n(&l4, &seq).unwrap(), set(&l4, &[0, 2]));
        assert_eq!(d_n(&l4, &[]).unwrap(), SubsetMask::empty(&l4));
    }

    #[test]
    fn d_n_errors() {
        let l3 = chain(3);
        assert_eq!(d_n(&l3, &[set(&l3, &[0])]), Err(Error::NotOpen(0)));
        assert_eq!(
            d_n(&l3, &[set(&l3, &[1, 2]), set(&l3, &[2])]),
            Err(Error::NotIncreasing(1))
        );
        let other = chain(3);
        assert_eq!(d_n(&l3, &[SubsetMask::full(&other)]), Err(Error::SpaceMismatch));
    }

    #[test]
    fn chain_witnesses() {
        let l2 = chain(2);
        let top = set(&l2, &[1]);
        let c = longest_alternating_chain(&l2, &top, false).unwrap();
        assert_eq!(c.points, vec![0, 1]);
        let none = longest_alternating_chain(&l2, &SubsetMask::empty(&l2), true).unwrap();
        assert!(none.is_empty());

        let x = two_chains();
        let a = set(&x, &[0, 3]);
        let cin = longest_alternating_chain(&x, &a, true).unwrap();
        assert_eq!(cin.points, vec![0, 1]);
        let cout = longest_alternating_chain(&x, &a, false).unwrap();
        assert_eq!(cout.points, vec![2, 3]);
        assert!(cin.is_valid_for(&x, &a) && cout.is_valid_for(&x, &a));
    }

    #[test]
    fn classify_examples() {
        let l2 = chain(2);
        assert_eq!(classify(&l2, &set(&l2, &[1])).unwrap().label, LevelLabel::ProperSigma(1));
        assert_eq!(
            classify(&l2, &SubsetMask::empty(&l2)).unwrap().label,
            LevelLabel::ProperSigma(0)
        );
        assert_eq!(
            classify(&l2, &SubsetMask::full(&l2)).unwrap().label,
            LevelLabel::ProperPi(0)
        );
        let x = two_chains();
        assert_eq!(
            classify(&x, &set(&x, &[0, 3])).unwrap().label,
            LevelLabel::ProperDelta(2)
        );
        let empty = chain(0);
        assert_eq!(
            classify(&empty, &SubsetMask::empty(&empty)).unwrap().label,
            LevelLabel::ProperDelta(0)
        );
    }

    #[test]
    fn oracle_examples() {
        let l2 = chain(2);
        assert_eq!(
            oracle_level(&l2, &set(&l2, &[1]), 3).unwrap().label,
            LevelLabel::ProperSigma(1)
        );
        let l3 = chain(3);
        let mid = set(&l3, &[1]);
        assert_eq!(oracle_level(&l3, &mid, 4).unwrap(), classify(&l3, &mid).unwrap());
        let x = two_chains();
        assert_eq!(
            oracle_level(&x, &set(&x, &[0, 3]), 5).unwrap().label,
            LevelLabel::ProperDelta(2)
        );
        assert!(matches!(
            oracle_level(&l3, &mid, 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn oracle_witness_realises_level() {
        let f = fan(1);
        let (n, seq) = oracle_sigma_witness(&f.poset, &f.a, 8).unwrap().unwrap();
        assert_eq!(n, classify(&f.poset, &f.a).unwrap().sigma_rank);
        assert_eq!(d_n(&f.poset, &seq).unwrap(), f.a);
    }

    #[test]
    fn fan_sets_levels() {
        // bot is outside A and B, so the longest chains start outside.
        for depth in 1..=3 {
            let f = fan(depth);
            for s in [f.a, f.b] {
                let level = classify(&f.poset, &s).unwrap();
                assert!(matches!(level.label, LevelLabel::ProperSigma(_)), "{level:?}");
                assert_eq!(level, oracle_level(&f.poset, &s, f.poset.len() + 1).unwrap());
                let dual = classify(&f.poset, &s.complement()).unwrap();
                assert_eq!(dual, level.dual());
            }
        }
        let f2 = fan(2);
        assert_eq!(classify(&f2.poset, &f2.a).unwrap().label, LevelLabel::ProperSigma(3));
    }

    #[test]
    fn clopen_points_of_discrete_space() {
        let a = antichain(3);
        let l = classify(&a, &set(&a, &[1])).unwrap();
        assert_eq!(l.label, LevelLabel::ProperDelta(1));
    }
}
