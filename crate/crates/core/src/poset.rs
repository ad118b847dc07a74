//! Finite posets, read as T0 spaces whose open sets are the up-sets.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::subset::{bit_indices, SubsetMask};
use crate::{Error, Result, MAX_ELEMENTS};

/// Identity of a constructed space. Masks and maps carry it so that mixing
/// objects from different spaces is caught at the call boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceId(u64);

static NEXT_SPACE: AtomicU64 = AtomicU64::new(1);

impl SpaceId {
    fn fresh() -> Self {
        SpaceId(NEXT_SPACE.fetch_add(1, Ordering::Relaxed))
    }
}

/// A finite partial order.
///
/// `up[i]` holds the bits of every `j` with `i <= j`, `down[i]` every `j`
/// with `j <= i`. The cover relation and one linear extension are derived
/// once at construction.
#[derive(Clone)]
pub struct FinitePoset {
    id: SpaceId,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<u64>,
    down: Vec<u64>,
    covers: Vec<(usize, usize)>,
    linext: Vec<usize>,
}

impl FinitePoset {
    /// Builds the poset whose order is the reflexive-transitive closure of
    /// `covers`. Pairs need not be a transitive reduction.
    pub fn from_covers<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = index_labels(&labels)?;
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_owned()))
        };
        let mut edges = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            edges.push((lookup(lo)?, lookup(hi)?));
        }
        Self::from_index_edges(labels, &edges)
    }

    /// Same as [`FinitePoset::from_covers`] with endpoints given by index.
    pub fn from_index_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        check_size(n)?;
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(lo, hi) in edges {
            if lo >= n {
                return Err(Error::UnknownElement(lo.to_string()));
            }
            if hi >= n {
                return Err(Error::UnknownElement(hi.to_string()));
            }
            up[lo] |= 1 << hi;
        }
        // Warshall over bit rows.
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        Self::from_up_rows(labels, up)
    }

    /// Builds from a full order relation, `leq(i, j)` meaning `i <= j`.
    /// The relation is checked for reflexivity, antisymmetry and transitivity.
    pub fn from_relation<F: Fn(usize, usize) -> bool>(labels: Vec<String>, leq: F) -> Result<Self> {
        let n = labels.len();
        check_size(n)?;
        let mut up = vec![0u64; n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if i == j || leq(i, j) {
                    *row |= 1 << j;
                }
            }
        }
        for i in 0..n {
            for j in bit_indices(up[i]) {
                if up[j] & !up[i] != 0 {
                    // Not transitive: report the first offending pair.
                    let k = bit_indices(up[j] & !up[i]).next().unwrap_or(j);
                    return Err(Error::NotTransitive(labels[i].clone(), labels[k].clone()));
                }
            }
        }
        Self::from_up_rows(labels, up)
    }

    fn from_up_rows(labels: Vec<String>, up: Vec<u64>) -> Result<Self> {
        let n = labels.len();
        let index = index_labels(&labels)?;
        let mut down = vec![0u64; n];
        for i in 0..n {
            for j in bit_indices(up[i]) {
                down[j] |= 1 << i;
            }
        }
        for i in 0..n {
            let both = up[i] & down[i] & !(1u64 << i);
            if both != 0 {
                let j = both.trailing_zeros() as usize;
                return Err(Error::Cycle(labels[i].clone(), labels[j].clone()));
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            let strict_up = up[i] & !(1u64 << i);
            for j in bit_indices(strict_up) {
                let between = strict_up & down[j] & !(1u64 << j);
                if between == 0 {
                    covers.push((i, j));
                }
            }
        }
        let linext = linear_extension(n, &down);
        Ok(FinitePoset {
            id: SpaceId::fresh(),
            labels,
            index,
            up,
            down,
            covers,
            linext,
        })
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_owned()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub(crate) fn up_bits(&self, i: usize) -> u64 {
        self.up[i]
    }

    pub(crate) fn down_bits(&self, i: usize) -> u64 {
        self.down[i]
    }

    pub(crate) fn full_bits(&self) -> u64 {
        crate::subset::full_bits(self.len())
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |&&(_, hi)| hi == i).map(|&(lo, _)| lo)
    }

    pub fn upper_covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |&&(lo, _)| lo == i).map(|&(_, hi)| hi)
    }

    /// Topologically sorted element indices: `i` precedes `j` whenever `i < j`.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linext
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i] == 1 << i).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i] == 1 << i).collect()
    }

    /// The induced order on the elements of `a`, in index order.
    pub fn subspace(&self, a: &SubsetMask) -> Result<FinitePoset> {
        Ok(self.subspace_with_embedding(a)?.0)
    }

    /// Like [`FinitePoset::subspace`], also returning the original index of
    /// every subspace element.
    pub fn subspace_with_embedding(&self, a: &SubsetMask) -> Result<(FinitePoset, Vec<usize>)> {
        a.check_space(self)?;
        if a.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let members: Vec<usize> = a.indices().collect();
        let labels = members.iter().map(|&i| self.labels[i].clone()).collect();
        let mut up = vec![0u64; members.len()];
        for (si, &i) in members.iter().enumerate() {
            for (sj, &j) in members.iter().enumerate() {
                if self.leq(i, j) {
                    up[si] |= 1 << sj;
                }
            }
        }
        Ok((Self::from_up_rows(labels, up)?, members))
    }

    /// Same order under new labels, as a distinct space.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<FinitePoset> {
        if labels.len() != self.len() {
            return Err(Error::SubsetLength {
                expected: self.len(),
                got: labels.len(),
            });
        }
        Self::from_up_rows(labels, self.up.clone())
    }

    /// Hasse diagram as a DOT digraph, edges from lower to upper cover.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{}\" {{\n  rankdir=BT;\n", escape_dot(name));
        for l in &self.labels {
            out.push_str(&format!("  \"{}\";\n", escape_dot(l)));
        }
        for &(lo, hi) in &self.covers {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                escape_dot(&self.labels[lo]),
                escape_dot(&self.labels[hi])
            ));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(&str, &str)> = self
            .covers
            .iter()
            .map(|&(lo, hi)| (self.label(lo), self.label(hi)))
            .collect();
        f.debug_struct("FinitePoset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

pub(crate) fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ELEMENTS {
        Err(Error::TooLarge {
            got: n,
            max: MAX_ELEMENTS,
        })
    } else {
        Ok(())
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Kahn's algorithm, always taking the smallest available index.
fn linear_extension(n: usize, down: &[u64]) -> Vec<usize> {
    let mut placed = 0u64;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .find(|&i| placed >> i & 1 == 0 && down[i] & !(1u64 << i) & !placed == 0)
            .expect("antisymmetric order always has a minimal unplaced element");
        placed |= 1 << next;
        order.push(next);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let p = FinitePoset::from_covers::<&str>(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
        assert!(p.covers().is_empty());
    }

    #[test]
    fn chain_closure() {
        let p = FinitePoset::from_covers(&["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert_eq!(p.linear_extension(), &[0, 1, 2]);
    }

    #[test]
    fn redundant_pairs_are_reduced() {
        let p = FinitePoset::from_covers(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c"), ("a", "c")],
        )
        .unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn cycle_rejected() {
        let err = FinitePoset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::Cycle(_, _)));
    }

    #[test]
    fn duplicate_and_unknown_labels() {
        assert_eq!(
            FinitePoset::from_covers::<&str>(&["a", "a"], &[]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
        assert_eq!(
            FinitePoset::from_covers(&["a"], &[("a", "z")]).unwrap_err(),
            Error::UnknownElement("z".into())
        );
    }

    #[test]
    fn relation_must_be_transitive() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let err = FinitePoset::from_relation(labels, |i, j| (i, j) == (0, 1) || (i, j) == (1, 2));
        assert!(err.is_err());
    }

    #[test]
    fn linear_extension_respects_order() {
        // 3 < 0 < 2, 1 isolated
        let p = FinitePoset::from_covers(&["a", "b", "c", "d"], &[("d", "a"), ("a", "c")]).unwrap();
        let pos: Vec<usize> = {
            let mut pos = vec![0; 4];
            for (k, &i) in p.linear_extension().iter().enumerate() {
                pos[i] = k;
            }
            pos
        };
        assert!(pos[3] < pos[0] && pos[0] < pos[2]);
        assert_eq!(p.linear_extension(), &[1, 3, 0, 2]);
    }

    #[test]
    fn subspace_induces_order() {
        let p = FinitePoset::from_covers(&["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap();
        let a = SubsetMask::from_indices(&p, [0, 2]).unwrap();
        let (s, emb) = p.subspace_with_embedding(&a).unwrap();
        assert_eq!(emb, vec![0, 2]);
        assert!(s.leq(0, 1));
        assert_eq!(s.covers(), &[(0, 1)]);
        assert_eq!(p.subspace(&SubsetMask::empty(&p)).unwrap_err(), Error::EmptySubspace);
    }

    #[test]
    fn dot_output() {
        let p = FinitePoset::from_covers(&["lo", "hi"], &[("lo", "hi")]).unwrap();
        let dot = p.to_dot("L2");
        assert!(dot.contains("\"lo\" -> \"hi\";"));
        assert!(dot.starts_with("digraph \"L2\""));
    }
}
