//! Concrete spaces and poset combinators.
//!
//! The fan spaces are finite truncations of an infinite space; they are test
//! fixtures and make no claim about the infinite space's degree structure,
//! whose incomparability phenomena need arbitrarily long chains.

use std::collections::BTreeMap;

use crate::poset::FinitePoset;
use crate::subset::SubsetMask;

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// The chain `0 < 1 < ... < n-1`. `chain(0)` is the empty poset.
pub fn chain(n: usize) -> FinitePoset {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    FinitePoset::from_index_edges(numbered(n), &edges).expect("chain is a valid poset")
}

/// `n` pairwise incomparable points.
pub fn antichain(n: usize) -> FinitePoset {
    FinitePoset::from_index_edges(numbered(n), &[]).expect("antichain is a valid poset")
}

/// Elements `0..n` ordered by reverse numeric order, so `0` is the top.
pub fn truncated_c_infinity(n: usize) -> FinitePoset {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i - 1)).collect();
    FinitePoset::from_index_edges(numbered(n), &edges).expect("reversed chain is a valid poset")
}

/// Labels for a disjoint union; clashes get a side prefix.
fn union_labels(p: &FinitePoset, q: &FinitePoset) -> Vec<String> {
    let clash = p.labels().iter().any(|l| q.index_of(l).is_ok());
    if clash {
        p.labels()
            .iter()
            .map(|l| format!("0:{l}"))
            .chain(q.labels().iter().map(|l| format!("1:{l}")))
            .collect()
    } else {
        p.labels().iter().chain(q.labels()).cloned().collect()
    }
}

/// `P + Q`: `P` below `Q`, every element of `P` under every element of `Q`.
pub fn linear_sum(p: &FinitePoset, q: &FinitePoset) -> FinitePoset {
    let np = p.len();
    FinitePoset::from_relation(union_labels(p, q), |i, j| match (i < np, j < np) {
        (true, true) => p.leq(i, j),
        (false, false) => q.leq(i - np, j - np),
        (true, false) => true,
        (false, true) => false,
    })
    .expect("linear sum of posets is a poset")
}

/// `P . Q` on `P x Q`: `(p0, q0) < (p1, q1)` iff `q0 < q1`, or `q0 = q1` and
/// `p0 < p1`. Element `(p, q)` has index `q * |P| + p`.
pub fn lex_product(p: &FinitePoset, q: &FinitePoset) -> FinitePoset {
    let np = p.len();
    let labels = (0..q.len())
        .flat_map(|qi| (0..np).map(move |pi| (pi, qi)))
        .map(|(pi, qi)| format!("({},{})", p.label(pi), q.label(qi)))
        .collect();
    FinitePoset::from_relation(labels, |i, j| {
        let (p0, q0) = (i % np, i / np);
        let (p1, q1) = (j % np, j / np);
        q.lt(q0, q1) || (q0 == q1 && p.leq(p0, p1))
    })
    .expect("lexicographic product of posets is a poset")
}

/// `(2 . L_k) + 4`: `k` stacked incomparable pairs under a 4-element antichain.
pub fn expected_structure(k: usize) -> FinitePoset {
    linear_sum(&lex_product(&antichain(2), &chain(k)), &antichain(4))
}

/// A truncated fan: chains `C_0..C_N` with `C_n = c{n}_{n} < ... < c{n}_0`,
/// pairwise incomparable, plus a bottom `bot` and a top `top`.
#[derive(Debug, Clone)]
pub struct Fan {
    pub poset: FinitePoset,
    pub depth: usize,
    /// `d_sets[k]` is `D_k` for `k = 0..=N`.
    pub d_sets: Vec<SubsetMask>,
    pub a: SubsetMask,
    pub b: SubsetMask,
}

impl Fan {
    pub fn element(&self, n: usize, k: usize) -> usize {
        self.poset
            .index_of(&fan_label(n, k))
            .expect("fan element exists")
    }

    pub fn bottom(&self) -> usize {
        self.poset.index_of("bot").expect("fan has bot")
    }

    pub fn top(&self) -> usize {
        self.poset.index_of("top").expect("fan has top")
    }

    /// `C_n` together with `bot` and `top`.
    pub fn chain_with_ends(&self, n: usize) -> SubsetMask {
        let members = (0..=n)
            .map(|k| self.element(n, k))
            .chain([self.bottom(), self.top()]);
        SubsetMask::from_indices(&self.poset, members).expect("indices in range")
    }

    /// Named subsets: `D0..DN`, `A`, `B`.
    pub fn named_sets(&self) -> BTreeMap<String, SubsetMask> {
        let mut sets: BTreeMap<String, SubsetMask> = self
            .d_sets
            .iter()
            .enumerate()
            .map(|(k, d)| (format!("D{k}"), *d))
            .collect();
        sets.insert("A".into(), self.a);
        sets.insert("B".into(), self.b);
        sets
    }
}

fn fan_label(n: usize, k: usize) -> String {
    format!("c{n}_{k}")
}

pub fn fan(depth: usize) -> Fan {
    let mut labels = vec!["bot".to_owned()];
    let mut edges = Vec::new();
    for n in 0..=depth {
        let first = labels.len();
        // bottom of C_n first
        for k in (0..=n).rev() {
            labels.push(fan_label(n, k));
        }
        edges.push((0, first));
        for i in first..first + n {
            edges.push((i, i + 1));
        }
    }
    let top = labels.len();
    labels.push("top".to_owned());
    for n in 0..=depth {
        // c{n}_0 is the last element pushed for chain n
        let c0 = (0..=n).map(|m| m + 1).sum::<usize>();
        edges.push((c0, top));
    }
    let poset = FinitePoset::from_index_edges(labels, &edges).expect("fan is a valid poset");

    let idx = |n: usize, k: usize| poset.index_of(&fan_label(n, k)).expect("fan element");
    // D_0 = up-closure of the chain tops; D_{i+1} adds up(c^n_{i+1}) for n > i.
    let mut d_bits = Vec::with_capacity(depth + 1);
    let mut current = (0..=depth).fold(0u64, |acc, n| acc | poset.up_bits(idx(n, 0)));
    d_bits.push(current);
    for i in 0..depth {
        current |= (i + 1..=depth).fold(0u64, |acc, n| acc | poset.up_bits(idx(n, i + 1)));
        d_bits.push(current);
    }
    // A = D_0 ∪ ⋃_k (D_{2k+2} \ D_{2k+1}) over indices present.
    let mut a_bits = d_bits[0];
    let mut k = 0;
    while 2 * k + 2 <= depth {
        a_bits |= d_bits[2 * k + 2] & !d_bits[2 * k + 1];
        k += 1;
    }
    let b_bits = a_bits & !(1u64 << top);
    let d_sets = d_bits
        .into_iter()
        .map(|b| SubsetMask::from_bits(&poset, b))
        .collect();
    let a = SubsetMask::from_bits(&poset, a_bits);
    let b = SubsetMask::from_bits(&poset, b_bits);
    Fan {
        poset,
        depth,
        d_sets,
        a,
        b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::poset_isomorphic;

    #[test]
    fn chain_and_antichain_basics() {
        assert!(chain(0).is_empty());
        assert_eq!(chain(4).covers().len(), 3);
        assert_eq!(antichain(2).enumerate_opens().count(), 4);
        assert!(poset_isomorphic(&antichain(1), &chain(1)).is_some());
    }

    #[test]
    fn reversed_chain() {
        let c = truncated_c_infinity(4);
        assert_eq!(c.maximal_elements(), vec![0]);
        assert!(c.leq(3, 0));
        assert_eq!(c.up_set(0).unwrap().indices().collect::<Vec<_>>(), vec![0]);
        assert!(poset_isomorphic(&c, &chain(4)).is_some());
        assert_eq!(c.dimension(), 3);
    }

    #[test]
    fn sums_and_products() {
        let s = linear_sum(&chain(1), &chain(1));
        assert!(poset_isomorphic(&s, &chain(2)).is_some());
        assert_eq!(s.labels(), &["0:0", "1:0"]);

        let p = lex_product(&antichain(2), &chain(2));
        assert_eq!(p.len(), 4);
        // two incomparable pairs stacked: each lower point under both upper points
        assert_eq!(p.covers(), &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(!p.comparable(0, 1) && !p.comparable(2, 3));

        let e = expected_structure(3);
        assert_eq!(e.len(), 10);
        assert_eq!(e.maximal_elements().len(), 4);
        assert_eq!(e.minimal_elements().len(), 2);
    }

    #[test]
    fn fan_zero() {
        let f = fan(0);
        assert_eq!(f.poset.len(), 3);
        assert!(poset_isomorphic(&f.poset, &chain(3)).is_some());
    }

    #[test]
    fn fan_one_memberships() {
        let f = fan(1);
        let pattern: Vec<bool> = [f.bottom(), f.element(1, 1), f.element(1, 0), f.top()]
            .iter()
            .map(|&i| f.a.contains(i))
            .collect();
        assert_eq!(pattern, vec![false, false, true, true]);
    }

    #[test]
    fn fan_chain_subspace_is_a_chain() {
        let f = fan(2);
        let sub = f.poset.subspace(&f.chain_with_ends(2)).unwrap();
        assert!(poset_isomorphic(&sub, &chain(5)).is_some());
    }

    #[test]
    fn fan_sets_are_increasing_and_open() {
        for depth in 0..=4 {
            let f = fan(depth);
            assert_eq!(f.poset.len(), (depth + 1) * (depth + 2) / 2 + 2);
            for w in f.d_sets.windows(2) {
                assert!(w[0].is_subset_of(&w[1]));
            }
            for d in &f.d_sets {
                assert!(f.poset.is_open(d).unwrap());
            }
        }
    }
}
