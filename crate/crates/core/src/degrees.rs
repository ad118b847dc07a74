//! Quotient degree structures of families of namings.

use rayon::prelude::*;
use serde::Serialize;

use crate::hierarchy::{classify, DiffLevel};
use crate::poset::FinitePoset;
use crate::reduce::{partition_reduces_with, reduce_set_bits, KPartition, ReducibilityKind};
use crate::subset::SubsetMask;
use crate::{Error, Result};

/// Default cap on the space size when the items are all subsets.
pub const DEFAULT_ALL_SUBSETS_CAP: usize = 6;

/// A naming of the space: a set or a k-partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Naming {
    Set(SubsetMask),
    Partition(KPartition),
}

impl Naming {
    fn k(&self) -> usize {
        match self {
            Naming::Set(_) => 2,
            Naming::Partition(p) => p.k(),
        }
    }

    /// Index-order string: 0/1 for sets, base-36 colors for partitions.
    pub fn key(&self) -> String {
        match self {
            Naming::Set(s) => s.to_bit_string(),
            Naming::Partition(p) => p.to_color_string(),
        }
    }
}

impl From<SubsetMask> for Naming {
    fn from(s: SubsetMask) -> Self {
        Naming::Set(s)
    }
}

impl From<KPartition> for Naming {
    fn from(p: KPartition) -> Self {
        Naming::Partition(p)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeClass {
    /// Index into `items` of the class representative (its first member).
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub max_antichain: usize,
    /// One witness antichain of classes.
    pub antichain: Vec<usize>,
    /// Class pairs `(a, b)` with `a` not below `b` and the complement of `b`
    /// not below `a`. Only computed for sets and 2-partitions.
    pub slo_violations: Vec<(usize, usize)>,
    pub slo_applicable: bool,
    /// Always false for a finite structure.
    pub has_infinite_descending: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeStructure {
    pub kind: ReducibilityKind,
    pub items: Vec<Naming>,
    pub classes: Vec<DegreeClass>,
    /// `class_of[i]` is the class of `items[i]`.
    pub class_of: Vec<usize>,
    /// Strict order between classes, as `(lower, upper)` pairs sorted.
    pub strict_order: Vec<(usize, usize)>,
    /// Cover pairs of the strict order, sorted by representative keys.
    pub hasse: Vec<(usize, usize)>,
    pub diagnostics: Diagnostics,
}

impl DegreeStructure {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn below(&self, lower: usize, upper: usize) -> bool {
        self.strict_order.binary_search(&(lower, upper)).is_ok()
    }

    pub fn representative(&self, class: usize) -> &Naming {
        &self.items[self.classes[class].representative]
    }

    /// Classes with nothing strictly below.
    pub fn minimal_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&c| !self.strict_order.iter().any(|&(_, hi)| hi == c))
            .collect()
    }

    /// The quotient as a poset whose elements are labelled by representative
    /// keys.
    pub fn quotient_poset(&self) -> Result<FinitePoset> {
        let labels = (0..self.classes.len())
            .map(|c| self.representative(c).key())
            .collect();
        FinitePoset::from_index_edges(labels, &self.hasse)
    }

    /// Hasse diagram of the quotient as DOT.
    pub fn to_dot(&self, name: &str) -> Result<String> {
        Ok(self.quotient_poset()?.to_dot(name))
    }
}

/// Colors of an item as a list, to drive reductions uniformly.
struct Prepared<'a> {
    space: &'a FinitePoset,
    kind: ReducibilityKind,
    items: &'a [Naming],
    levels: Vec<Option<DiffLevel>>,
}

impl Prepared<'_> {
    fn reduces(&self, i: usize, j: usize) -> bool {
        if i == j || self.items[i] == self.items[j] {
            return true;
        }
        if self.kind == ReducibilityKind::Wadge {
            if let (Some(a), Some(b)) = (&self.levels[i], &self.levels[j]) {
                if !a.le(b) {
                    return false;
                }
            }
        }
        match (&self.items[i], &self.items[j]) {
            (Naming::Set(a), Naming::Set(b)) => {
                reduce_set_bits(self.space, a.bits(), b.bits(), self.kind).is_some()
            }
            (a, b) => {
                let (a, b) = (as_partition(a), as_partition(b));
                partition_reduces_with(self.space, &a, &b, self.kind)
                    .expect("validated items")
                    .is_some()
            }
        }
    }

    /// Is the complement of item `j` reducible to item `i`?
    fn complement_reduces(&self, j: usize, i: usize) -> bool {
        match (&self.items[j], &self.items[i]) {
            (Naming::Set(b), Naming::Set(a)) => {
                reduce_set_bits(self.space, b.complement().bits(), a.bits(), self.kind).is_some()
            }
            (b, a) => {
                let b = as_partition(b);
                let flipped: Vec<usize> = b.colors().iter().map(|&c| 1 - c).collect();
                let flipped = KPartition::new(self.space, 2, flipped).expect("two colors");
                partition_reduces_with(self.space, &flipped, &as_partition(a), self.kind)
                    .expect("validated items")
                    .is_some()
            }
        }
    }
}

fn as_partition(n: &Naming) -> KPartition {
    match n {
        Naming::Set(s) => KPartition::from_subset(s),
        Naming::Partition(p) => p.clone(),
    }
}

/// All subsets of a space in increasing bit order, refusing spaces above `cap`.
pub fn all_subsets(space: &FinitePoset, cap: usize) -> Result<Vec<Naming>> {
    if space.len() > cap {
        return Err(Error::CapExceeded {
            what: "space size for all-subsets",
            got: space.len(),
            cap,
        });
    }
    Ok((0..1u64 << space.len())
        .map(|b| Naming::Set(SubsetMask::from_bits(space, b)))
        .collect())
}

/// All k-partitions of a space in lexicographic color order, refusing spaces
/// above `cap`.
pub fn all_partitions(space: &FinitePoset, k: usize, cap: usize) -> Result<Vec<Naming>> {
    if space.len() > cap {
        return Err(Error::CapExceeded {
            what: "space size for all-partitions",
            got: space.len(),
            cap,
        });
    }
    let count = k.pow(space.len() as u32);
    if count == 0 {
        return Ok(Vec::new());
    }
    let n = space.len();
    let mut out = Vec::with_capacity(count);
    let mut colors = vec![0usize; n];
    loop {
        out.push(Naming::Partition(KPartition::new(space, k, colors.clone())?));
        // odometer, last element fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < k {
                break;
            }
            colors[i] = 0;
        }
    }
}

/// Computes the quotient of `items` under the given reducibility.
///
/// Items are merged into classes incrementally against the representatives
/// found so far, then the order is computed between representatives only.
/// Pairwise tests run in parallel; merging is serial.
pub fn degree_structure(space: &FinitePoset, items: Vec<Naming>, kind: ReducibilityKind) -> Result<DegreeStructure> {
    let k = items.first().map_or(2, Naming::k);
    for item in &items {
        match item {
            Naming::Set(s) => s.check_space(space)?,
            Naming::Partition(p) => p.check_space(space)?,
        }
        if item.k() != k {
            return Err(Error::ColorCountMismatch(k, item.k()));
        }
    }
    let levels = items
        .iter()
        .map(|item| match item {
            Naming::Set(s) => classify(space, s).map(Some),
            Naming::Partition(p) if p.k() == 2 => {
                classify(space, &SubsetMask::from_bits(space, p.color_bits(1))).map(Some)
            }
            Naming::Partition(_) => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    let prepared = Prepared {
        space,
        kind,
        items: &items,
        levels,
    };

    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(items.len());
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..items.len() {
        let found = reps
            .par_iter()
            .position_first(|&r| prepared.reduces(i, r) && prepared.reduces(r, i));
        match found {
            Some(c) => {
                class_of.push(c);
                members[c].push(i);
            }
            None => {
                class_of.push(reps.len());
                reps.push(i);
                members.push(vec![i]);
            }
        }
    }

    let m = reps.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut strict_order: Vec<(usize, usize)> = pairs
        .par_iter()
        .filter(|&&(a, b)| prepared.reduces(reps[a], reps[b]))
        .copied()
        .collect();
    strict_order.sort_unstable();

    let mut le = vec![vec![false; m]; m];
    for &(a, b) in &strict_order {
        le[a][b] = true;
    }
    let keys: Vec<String> = reps.iter().map(|&r| items[r].key()).collect();
    let mut hasse: Vec<(usize, usize)> = strict_order
        .iter()
        .filter(|&&(a, b)| !(0..m).any(|c| le[a][c] && le[c][b]))
        .copied()
        .collect();
    hasse.sort_by(|x, y| (&keys[x.0], &keys[x.1]).cmp(&(&keys[y.0], &keys[y.1])));

    let antichain = max_antichain(&le);
    let slo_applicable = k == 2;
    let slo_violations = if slo_applicable {
        pairs
            .par_iter()
            .filter(|&&(a, b)| !le[a][b] && !prepared.complement_reduces(reps[b], reps[a]))
            .copied()
            .collect()
    } else {
        Vec::new()
    };

    Ok(DegreeStructure {
        kind,
        classes: reps
            .iter()
            .zip(members)
            .map(|(&representative, members)| DegreeClass {
                representative,
                members,
            })
            .collect(),
        class_of,
        strict_order,
        hasse,
        diagnostics: Diagnostics {
            max_antichain: antichain.len(),
            antichain,
            slo_violations,
            slo_applicable,
            has_infinite_descending: false,
        },
        items,
    })
}

/// Largest set of pairwise incomparable classes: a maximum clique of the
/// incomparability graph, by branch and bound with a greedy coloring bound.
pub fn max_antichain(le: &[Vec<bool>]) -> Vec<usize> {
    let m = le.len();
    let adj: Vec<Vec<bool>> = (0..m)
        .map(|a| (0..m).map(|b| a != b && !le[a][b] && !le[b][a]).collect())
        .collect();
    let mut best = Vec::new();
    let mut current = Vec::new();
    let candidates: Vec<usize> = (0..m).collect();
    expand_clique(&adj, &mut current, candidates, &mut best);
    best.sort_unstable();
    best
}

fn expand_clique(adj: &[Vec<bool>], current: &mut Vec<usize>, candidates: Vec<usize>, best: &mut Vec<usize>) {
    if candidates.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    // Greedy coloring: a clique uses at most one vertex per color.
    let mut colors: Vec<Vec<usize>> = Vec::new();
    for &v in &candidates {
        match colors.iter_mut().find(|cls| cls.iter().all(|&u| !adj[u][v])) {
            Some(cls) => cls.push(v),
            None => colors.push(vec![v]),
        }
    }
    if current.len() + colors.len() <= best.len() {
        return;
    }
    let mut remaining = candidates;
    while let Some(v) = remaining.first().copied() {
        if current.len() + remaining.len() <= best.len() {
            return;
        }
        remaining.remove(0);
        let next: Vec<usize> = remaining.iter().copied().filter(|&u| adj[v][u]).collect();
        current.push(v);
        expand_clique(adj, current, next, best);
        current.pop();
    }
    if current.len() > best.len() {
        *best = current.clone();
    }
}

/// Finite-scale reading of the structure taxonomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// No SLO violations and no antichain of three classes.
    pub finitely_very_good: bool,
    pub max_antichain: usize,
    pub slo_violation_count: usize,
    pub class_count: usize,
    /// A finite quotient has no infinite antichains or descending chains.
    pub wqo: bool,
    pub note: &'static str,
}

pub fn structure_label(d: &DegreeStructure) -> StructureReport {
    let slo = d.diagnostics.slo_violations.len();
    let very_good = slo == 0 && d.diagnostics.max_antichain <= 2;
    StructureReport {
        finitely_very_good: very_good,
        max_antichain: d.diagnostics.max_antichain,
        slo_violation_count: slo,
        class_count: d.classes.len(),
        wqo: true,
        note: "finite structure: always a wqo; good/bad distinctions need infinite families",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{antichain, chain};
    use crate::reduce::KPartition;

    fn le_from_pairs(m: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut le = vec![vec![false; m]; m];
        for &(a, b) in pairs {
            le[a][b] = true;
        }
        le
    }

    #[test]
    fn single_point() {
        let x = chain(1);
        let d = degree_structure(&x, all_subsets(&x, 6).unwrap(), ReducibilityKind::Wadge).unwrap();
        assert_eq!(d.class_count(), 2);
        assert!(d.strict_order.is_empty());
        assert_eq!(d.diagnostics.max_antichain, 2);
        assert!(structure_label(&d).finitely_very_good);
    }

    #[test]
    fn two_chain_structure() {
        let x = chain(2);
        let d = degree_structure(&x, all_subsets(&x, 6).unwrap(), ReducibilityKind::Wadge).unwrap();
        assert_eq!(d.class_count(), 4);
        let cls = |bits: u64| d.class_of[bits as usize];
        let (empty, full, top, bottom) = (cls(0), cls(3), cls(2), cls(1));
        assert!(!d.below(empty, full) && !d.below(full, empty));
        assert!(!d.below(top, bottom) && !d.below(bottom, top));
        for lo in [empty, full] {
            for hi in [top, bottom] {
                assert!(d.below(lo, hi));
            }
        }
        assert_eq!(d.hasse.len(), 4);
        assert_eq!(d.minimal_classes(), vec![empty, full]);
        let report = structure_label(&d);
        assert!(report.finitely_very_good);
        assert_eq!(report.max_antichain, 2);
    }

    #[test]
    fn all_functions_has_three_classes() {
        for x in [chain(2), antichain(3), chain(4)] {
            let d = degree_structure(&x, all_subsets(&x, 6).unwrap(), ReducibilityKind::AllFunctions).unwrap();
            assert_eq!(d.class_count(), 3);
            let empty = d.class_of[0];
            let full = d.class_of[(1usize << x.len()) - 1];
            let mid = 3 - empty - full;
            assert!(d.below(empty, mid) && d.below(full, mid));
            assert!(!d.below(empty, full) && !d.below(full, empty));
        }
    }

    #[test]
    fn constant_partitions_form_antichain() {
        let x = chain(3);
        let items = (0..3)
            .map(|c| Naming::Partition(KPartition::constant(&x, 3, c).unwrap()))
            .collect();
        let d = degree_structure(&x, items, ReducibilityKind::Wadge).unwrap();
        assert_eq!(d.class_count(), 3);
        assert_eq!(d.diagnostics.max_antichain, 3);
        assert!(!d.diagnostics.slo_applicable);
        assert!(!structure_label(&d).finitely_very_good);
    }

    #[test]
    fn mixed_color_counts_rejected() {
        let x = chain(2);
        let items = vec![
            Naming::Set(SubsetMask::empty(&x)),
            Naming::Partition(KPartition::constant(&x, 3, 0).unwrap()),
        ];
        assert_eq!(
            degree_structure(&x, items, ReducibilityKind::Wadge).unwrap_err(),
            Error::ColorCountMismatch(2, 3)
        );
    }

    #[test]
    fn caps() {
        assert!(all_subsets(&chain(7), 6).is_err());
        assert_eq!(all_partitions(&chain(2), 3, 6).unwrap().len(), 9);
        assert!(all_partitions(&chain(5), 3, 4).is_err());
    }

    #[test]
    fn max_antichain_small_cases() {
        // 0 < 1, 2 and 3 free
        let le = le_from_pairs(4, &[(0, 1)]);
        assert_eq!(max_antichain(&le), vec![0, 2, 3]);
        let chain_le = le_from_pairs(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(max_antichain(&chain_le).len(), 1);
        assert!(max_antichain(&[]).is_empty());
    }

    #[test]
    fn max_antichain_matches_brute_force() {
        // quotient of 2-chain-pairs: expected_structure(3) has width 4
        let p = crate::gallery::expected_structure(3);
        let m = p.len();
        let le: Vec<Vec<bool>> = (0..m).map(|a| (0..m).map(|b| p.lt(a, b)).collect()).collect();
        let brute = (0u64..1 << m)
            .filter(|&s| {
                let v: Vec<usize> = crate::subset::bit_indices(s).collect();
                v.iter().all(|&a| v.iter().all(|&b| a == b || !p.comparable(a, b)))
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap();
        assert_eq!(max_antichain(&le).len(), brute);
        assert_eq!(brute, 4);
    }
}
