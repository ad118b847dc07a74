//! Continuous reductions between namings of one finite space.
//!
//! Continuity on a finite Alexandrov space is monotonicity, so `A <=_W B`
//! asks for a monotone self-map `f` with `A = f^{-1}(B)`. The search assigns
//! images along the cached linear extension: each element's candidates are
//! the targets of the right color lying above the images of its lower covers,
//! tried in increasing index order, with a forward check on upper covers.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::hierarchy::classify;
use crate::poset::{FinitePoset, SpaceId};
use crate::subset::{bit_indices, SubsetMask};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducibilityKind {
    /// Continuous (monotone) self-maps.
    Wadge,
    /// Arbitrary self-maps.
    AllFunctions,
}

/// A total map from a space to itself.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SelfMap {
    space: SpaceId,
    image: Vec<usize>,
}

impl SelfMap {
    pub fn new(space: &FinitePoset, image: Vec<usize>) -> Result<Self> {
        if image.len() != space.len() {
            return Err(Error::MapArity {
                expected: space.len(),
                got: image.len(),
            });
        }
        if let Some(&t) = image.iter().find(|&&t| t >= space.len()) {
            return Err(Error::MapTarget(t));
        }
        Ok(SelfMap {
            space: space.id(),
            image,
        })
    }

    pub fn identity(space: &FinitePoset) -> Self {
        SelfMap {
            space: space.id(),
            image: (0..space.len()).collect(),
        }
    }

    pub fn constant(space: &FinitePoset, target: usize) -> Result<Self> {
        Self::new(space, vec![target; space.len()])
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn after(&self, first: &SelfMap) -> Result<SelfMap> {
        if self.space != first.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(SelfMap {
            space: self.space,
            image: first.image.iter().map(|&y| self.image[y]).collect(),
        })
    }

    pub fn preimage(&self, space: &FinitePoset, b: &SubsetMask) -> Result<SubsetMask> {
        self.check_space(space)?;
        b.check_space(space)?;
        let bits = self
            .image
            .iter()
            .enumerate()
            .filter(|(_, &t)| b.contains(t))
            .fold(0u64, |acc, (x, _)| acc | 1 << x);
        Ok(SubsetMask::from_bits(space, bits))
    }

    pub fn range(&self, space: &FinitePoset) -> Result<SubsetMask> {
        self.check_space(space)?;
        SubsetMask::from_indices(space, self.image.iter().copied())
    }

    pub fn is_monotone(&self, space: &FinitePoset) -> bool {
        self.space == space.id() && is_monotone(space, &self.image)
    }

    fn check_space(&self, space: &FinitePoset) -> Result<()> {
        if self.space == space.id() && self.image.len() == space.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `x -> f(x)` lines using element labels.
    pub fn to_lines(&self, space: &FinitePoset) -> String {
        self.image
            .iter()
            .enumerate()
            .map(|(x, &t)| format!("{} -> {}\n", space.label(x), space.label(t)))
            .collect()
    }
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelfMap{:?}", self.image)
    }
}

impl Serialize for SelfMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.image.serialize(serializer)
    }
}

/// A self-map known to be monotone, i.e. continuous.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonotoneMap(SelfMap);

impl MonotoneMap {
    pub fn new(space: &FinitePoset, image: Vec<usize>) -> Result<Self> {
        Self::try_from_map(space, SelfMap::new(space, image)?)
    }

    pub fn try_from_map(space: &FinitePoset, map: SelfMap) -> Result<Self> {
        map.check_space(space)?;
        if is_monotone(space, &map.image) {
            Ok(MonotoneMap(map))
        } else {
            Err(Error::NotMonotone)
        }
    }

    pub fn as_map(&self) -> &SelfMap {
        &self.0
    }

    pub fn into_map(self) -> SelfMap {
        self.0
    }
}

/// `x <= y` implies `f(x) <= f(y)`. Checking cover pairs suffices.
pub fn is_monotone(space: &FinitePoset, image: &[usize]) -> bool {
    image.len() == space.len()
        && image.iter().all(|&t| t < space.len())
        && space
            .covers()
            .iter()
            .all(|&(lo, hi)| space.leq(image[lo], image[hi]))
}

/// A map from the space's elements to colors `0..k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KPartition {
    space: SpaceId,
    k: usize,
    colors: Vec<usize>,
}

impl KPartition {
    pub fn new(space: &FinitePoset, k: usize, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != space.len() {
            return Err(Error::SubsetLength {
                expected: space.len(),
                got: colors.len(),
            });
        }
        if let Some((element, &color)) = colors.iter().enumerate().find(|(_, &c)| c >= k) {
            return Err(Error::ColorOutOfRange { element, color, k });
        }
        Ok(KPartition {
            space: space.id(),
            k,
            colors,
        })
    }

    pub fn constant(space: &FinitePoset, k: usize, color: usize) -> Result<Self> {
        Self::new(space, k, vec![color; space.len()])
    }

    /// Characteristic function: color 1 on members, 0 elsewhere.
    pub fn from_subset(a: &SubsetMask) -> Self {
        KPartition {
            space: a.space_id(),
            k: 2,
            colors: (0..a.len()).map(|i| usize::from(a.contains(i))).collect(),
        }
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, x: usize) -> usize {
        self.colors[x]
    }

    /// Bits of the elements carrying `color`.
    pub(crate) fn color_bits(&self, color: usize) -> u64 {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == color)
            .fold(0u64, |acc, (x, _)| acc | 1 << x)
    }

    pub(crate) fn check_space(&self, space: &FinitePoset) -> Result<()> {
        if self.space == space.id() && self.colors.len() == space.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn to_color_string(&self) -> String {
        self.colors
            .iter()
            .map(|c| std::char::from_digit(*c as u32, 36).unwrap_or('?'))
            .collect()
    }
}

impl fmt::Debug for KPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPartition(k={}, {})", self.k, self.to_color_string())
    }
}

impl Serialize for KPartition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_color_string())
    }
}

/// Search state shared by the deterministic and randomized map searches.
struct MapSearch<'a> {
    space: &'a FinitePoset,
    domains: &'a [u64],
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    position: Vec<usize>,
    image: Vec<usize>,
}

impl<'a> MapSearch<'a> {
    fn new(space: &'a FinitePoset, domains: &'a [u64]) -> Self {
        let n = space.len();
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(lo, hi) in space.covers() {
            lower[hi].push(lo);
            upper[lo].push(hi);
        }
        let mut position = vec![0; n];
        for (k, &x) in space.linear_extension().iter().enumerate() {
            position[x] = k;
        }
        MapSearch {
            space,
            domains,
            lower,
            upper,
            position,
            image: vec![usize::MAX; n],
        }
    }

    /// Targets for `x` given the images of its lower covers placed before
    /// position `placed`.
    fn feasible(&self, x: usize, placed: usize) -> u64 {
        self.lower[x]
            .iter()
            .filter(|&&p| self.position[p] < placed)
            .fold(self.domains[x], |acc, &p| acc & self.space.up_bits(self.image[p]))
    }

    fn run<F: FnMut(u64) -> Vec<usize>>(&mut self, pos: usize, order: &mut F) -> bool {
        let Some(&x) = self.space.linear_extension().get(pos) else {
            return true;
        };
        let feasible = self.feasible(x, pos);
        for t in order(feasible) {
            self.image[x] = t;
            let ok = self.upper[x]
                .iter()
                .all(|&y| self.feasible(y, pos + 1) != 0);
            if ok && self.run(pos + 1, order) {
                return true;
            }
        }
        self.image[x] = usize::MAX;
        false
    }
}

/// First monotone map (in search order) with `f(x)` in `domains[x]`.
pub(crate) fn find_monotone_map(space: &FinitePoset, domains: &[u64]) -> Option<Vec<usize>> {
    if domains.contains(&0) {
        return None;
    }
    let mut search = MapSearch::new(space, domains);
    search
        .run(0, &mut |bits| bit_indices(bits).collect())
        .then(|| search.image)
}

/// A uniformly shuffled search: returns some monotone map respecting
/// `domains`, or `None` if there is none.
pub fn random_monotone_map_in<R: Rng + ?Sized>(
    space: &FinitePoset,
    domains: &[u64],
    rng: &mut R,
) -> Option<Vec<usize>> {
    if domains.contains(&0) {
        return None;
    }
    let mut search = MapSearch::new(space, domains);
    let found = search.run(0, &mut |bits| {
        let mut v: Vec<usize> = bit_indices(bits).collect();
        v.shuffle(rng);
        v
    });
    found.then(|| search.image)
}

fn find_any_map(domains: &[u64]) -> Option<Vec<usize>> {
    domains
        .iter()
        .map(|&d| (d != 0).then(|| d.trailing_zeros() as usize))
        .collect()
}

fn reduce_domains(space: &FinitePoset, domains: &[u64], kind: ReducibilityKind) -> Option<SelfMap> {
    let image = match kind {
        ReducibilityKind::Wadge => find_monotone_map(space, domains)?,
        ReducibilityKind::AllFunctions => find_any_map(domains)?,
    };
    Some(SelfMap {
        space: space.id(),
        image,
    })
}

/// A witness `f` with `x in a <=> f(x) in b`, monotone for
/// [`ReducibilityKind::Wadge`]; `None` when no such map exists.
pub fn wadge_reduces(
    space: &FinitePoset,
    a: &SubsetMask,
    b: &SubsetMask,
    kind: ReducibilityKind,
) -> Result<Option<SelfMap>> {
    a.check_space(space)?;
    b.check_space(space)?;
    if kind == ReducibilityKind::Wadge && !classify(space, a)?.le(&classify(space, b)?) {
        return Ok(None);
    }
    Ok(reduce_set_bits(space, a.bits(), b.bits(), kind))
}

/// Reduction search without the level pre-filter.
pub(crate) fn reduce_set_bits(space: &FinitePoset, a: u64, b: u64, kind: ReducibilityKind) -> Option<SelfMap> {
    let inside = b & space.full_bits();
    let outside = !b & space.full_bits();
    let domains: Vec<u64> = (0..space.len())
        .map(|x| if a >> x & 1 == 1 { inside } else { outside })
        .collect();
    reduce_domains(space, &domains, kind)
}

/// A monotone witness `f` with `mu = nu . f`.
pub fn partition_reduces(space: &FinitePoset, mu: &KPartition, nu: &KPartition) -> Result<Option<SelfMap>> {
    partition_reduces_with(space, mu, nu, ReducibilityKind::Wadge)
}

pub fn partition_reduces_with(
    space: &FinitePoset,
    mu: &KPartition,
    nu: &KPartition,
    kind: ReducibilityKind,
) -> Result<Option<SelfMap>> {
    mu.check_space(space)?;
    nu.check_space(space)?;
    if mu.k != nu.k {
        return Err(Error::ColorCountMismatch(mu.k, nu.k));
    }
    let by_color: Vec<u64> = (0..mu.k).map(|c| nu.color_bits(c)).collect();
    let domains: Vec<u64> = mu.colors.iter().map(|&c| by_color[c]).collect();
    Ok(reduce_domains(space, &domains, kind))
}

/// `r` is monotone, lands in `y`, and fixes `y` pointwise.
pub fn is_retraction(space: &FinitePoset, y: &SubsetMask, r: &SelfMap) -> Result<bool> {
    y.check_space(space)?;
    r.check_space(space)?;
    let lands = r.image.iter().all(|&t| y.contains(t));
    let fixes = y.indices().all(|p| r.image[p] == p);
    Ok(lands && fixes && is_monotone(space, &r.image))
}

/// Counterexample to `nu -> nu . r` preserving and reflecting reducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCounterexample {
    pub left: SubsetMask,
    pub right: SubsetMask,
    /// Reducibility inside the retract.
    pub reduces_in_retract: bool,
    /// Reducibility of the pulled-back sets in the whole space.
    pub reduces_in_space: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub is_retraction: bool,
    pub pairs_checked: usize,
    pub counterexamples: Vec<EmbeddingCounterexample>,
}

impl EmbeddingReport {
    pub fn is_exact(&self) -> bool {
        self.is_retraction && self.counterexamples.is_empty()
    }
}

/// Checks on every ordered pair of `sample` (subsets of `y`) that
/// `nu_1 <=_W nu_2` in the subspace `y` iff `nu_1 . r <=_W nu_2 . r` in the
/// whole space.
pub fn degree_embedding_check(
    space: &FinitePoset,
    y: &SubsetMask,
    r: &SelfMap,
    sample: &[SubsetMask],
) -> Result<EmbeddingReport> {
    if !is_retraction(space, y, r)? {
        return Ok(EmbeddingReport {
            is_retraction: false,
            pairs_checked: 0,
            counterexamples: Vec::new(),
        });
    }
    let (sub, members) = space.subspace_with_embedding(y)?;
    let mut local = Vec::with_capacity(sample.len());
    let mut pulled = Vec::with_capacity(sample.len());
    for s in sample {
        s.check_space(space)?;
        if !s.is_subset_of(y) {
            return Err(Error::SpaceMismatch);
        }
        let bits = members
            .iter()
            .enumerate()
            .filter(|(_, &orig)| s.contains(orig))
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        local.push(SubsetMask::from_bits(&sub, bits));
        pulled.push(r.preimage(space, s)?);
    }
    let mut counterexamples = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..sample.len() {
        for j in 0..sample.len() {
            pairs_checked += 1;
            let in_y = wadge_reduces(&sub, &local[i], &local[j], ReducibilityKind::Wadge)?.is_some();
            let in_x = wadge_reduces(space, &pulled[i], &pulled[j], ReducibilityKind::Wadge)?.is_some();
            if in_y != in_x {
                counterexamples.push(EmbeddingCounterexample {
                    left: sample[i],
                    right: sample[j],
                    reduces_in_retract: in_y,
                    reduces_in_space: in_x,
                });
            }
        }
    }
    Ok(EmbeddingReport {
        is_retraction: true,
        pairs_checked,
        counterexamples,
    })
}
