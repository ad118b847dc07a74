//! Order isomorphism, canonical forms, and enumeration of small posets up to
//! isomorphism.

use std::collections::{BTreeMap, HashSet};

use crate::poset::FinitePoset;
use crate::subset::bit_indices;
use crate::{Error, Result};

/// Largest size accepted by [`canonical_form`] and [`posets_up_to_iso`].
pub const MAX_CANONICAL: usize = 8;

/// An order isomorphism `x -> image[x]` from `a` onto `b`, if one exists.
///
/// Elements of `a` are assigned in index order, candidates in `b` in index
/// order, restricted to elements with the same up/down sizes.
pub fn poset_isomorphic(a: &FinitePoset, b: &FinitePoset) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() || a.covers().len() != b.covers().len() {
        return None;
    }
    let sig = |p: &FinitePoset, i: usize| (p.up_bits(i).count_ones(), p.down_bits(i).count_ones());
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let mut ha = sa.clone();
    let mut hb = sb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return None;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend_iso(a, b, &sa, &sb, 0, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

fn extend_iso(
    a: &FinitePoset,
    b: &FinitePoset,
    sa: &[(u32, u32)],
    sb: &[(u32, u32)],
    x: usize,
    image: &mut [usize],
    used: &mut u64,
) -> bool {
    if x == a.len() {
        return true;
    }
    for y in 0..b.len() {
        if *used >> y & 1 == 1 || sa[x] != sb[y] {
            continue;
        }
        let consistent = (0..x).all(|p| {
            let q = image[p];
            a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
        });
        if !consistent {
            continue;
        }
        image[x] = y;
        *used |= 1 << y;
        if extend_iso(a, b, sa, sb, x + 1, image, used) {
            return true;
        }
        *used &= !(1 << y);
    }
    image[x] = usize::MAX;
    false
}

/// Canonical encoding of a poset's isomorphism type.
///
/// Elements are first split into cells by iterated refinement of
/// (down-size, up-size, multisets of neighbouring cells). Cells are ordered by
/// their invariant, and within cells every permutation is tried; the result is
/// the lexicographically least strict-order adjacency word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub size: usize,
    pub word: u64,
}

pub fn canonical_form(p: &FinitePoset) -> Result<CanonicalForm> {
    let n = p.len();
    if n > MAX_CANONICAL {
        return Err(Error::CapExceeded {
            what: "canonical form size",
            got: n,
            cap: MAX_CANONICAL,
        });
    }
    let cells = refined_cells(p);
    let mut best: Option<u64> = None;
    let mut order = Vec::with_capacity(n);
    permute_cells(p, &cells, 0, &mut order, &mut best);
    Ok(CanonicalForm {
        size: n,
        word: best.unwrap_or(0),
    })
}

fn refined_cells(p: &FinitePoset) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut color: Vec<usize> = {
        let base: Vec<(u32, u32)> = (0..n)
            .map(|i| (p.down_bits(i).count_ones(), p.up_bits(i).count_ones()))
            .collect();
        rank_values(&base)
    };
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut lo: Vec<usize> = p.lower_covers(i).map(|j| color[j]).collect();
                let mut hi: Vec<usize> = p.upper_covers(i).map(|j| color[j]).collect();
                lo.sort_unstable();
                hi.sort_unstable();
                (color[i], lo, hi)
            })
            .collect();
        let next = rank_values(&sig);
        let classes_before = color.iter().collect::<HashSet<_>>().len();
        let classes_after = next.iter().collect::<HashSet<_>>().len();
        color = next;
        if classes_after == classes_before {
            break;
        }
    }
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in color.into_iter().enumerate() {
        cells.entry(c).or_default().push(i);
    }
    cells.into_values().collect()
}

/// Replaces each value by its rank among the distinct sorted values.
fn rank_values<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = values.to_vec();
    distinct.sort();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).expect("value present"))
        .collect()
}

fn permute_cells(
    p: &FinitePoset,
    cells: &[Vec<usize>],
    cell: usize,
    order: &mut Vec<usize>,
    best: &mut Option<u64>,
) {
    if cell == cells.len() {
        let w = adjacency_word(p, order);
        if best.map_or(true, |b| w < b) {
            *best = Some(w);
        }
        return;
    }
    let members = &cells[cell];
    let mut perm = members.clone();
    heap_permutations(&mut perm, members.len(), &mut |perm| {
        let mark = order.len();
        order.extend_from_slice(perm);
        permute_cells(p, cells, cell + 1, order, best);
        order.truncate(mark);
    });
}

fn heap_permutations<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, visit: &mut F) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, visit);
}

// Bit (i * n + j) set when order[i] < order[j].
fn adjacency_word(p: &FinitePoset, order: &[usize]) -> u64 {
    let n = order.len();
    let mut w = 0u64;
    for (i, &x) in order.iter().enumerate() {
        for (j, &y) in order.iter().enumerate() {
            if p.lt(x, y) {
                w |= 1 << (i * n + j);
            }
        }
    }
    w
}

/// One representative of every isomorphism type of poset on `n` elements,
/// sorted by canonical form.
///
/// Posets on `m` elements are grown from those on `m - 1` by adding a new
/// maximal element above an arbitrary down-set, then deduplicated by
/// canonical form. Elements are labelled `0..n`.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<FinitePoset>> {
    if n > MAX_CANONICAL {
        return Err(Error::CapExceeded {
            what: "poset enumeration size",
            got: n,
            cap: MAX_CANONICAL,
        });
    }
    // Each layer stores strict-down rows; element m's row only uses bits < m.
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for m in 0..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rows in &layer {
            let base = from_down_rows(rows)?;
            for down_set in down_sets(&base) {
                let mut grown = rows.clone();
                grown.push(down_set);
                let p = from_down_rows(&grown)?;
                if seen.insert(canonical_form(&p)?) {
                    next.push(grown);
                }
            }
        }
        debug_assert!(next.iter().all(|r| r.len() == m + 1));
        layer = next;
    }
    let mut out: Vec<(CanonicalForm, FinitePoset)> = layer
        .iter()
        .map(|rows| {
            let p = from_down_rows(rows)?;
            Ok((canonical_form(&p)?, p))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

fn from_down_rows(rows: &[u64]) -> Result<FinitePoset> {
    let labels = (0..rows.len()).map(|i| i.to_string()).collect();
    let edges: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, &row)| bit_indices(row).map(move |j| (j, i)))
        .collect();
    FinitePoset::from_index_edges(labels, &edges)
}

fn down_sets(p: &FinitePoset) -> Vec<u64> {
    (0..1u64 << p.len())
        .filter(|&b| p.down_closure_bits(b) == b)
        .collect()
}
