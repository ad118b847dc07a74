//! Alexandrov topology on a finite poset: opens are up-sets, closures are
//! down-closures, continuity is monotonicity.

use std::collections::HashMap;

use serde::Serialize;

use crate::poset::FinitePoset;
use crate::subset::{bit_indices, SubsetMask};
use crate::{Error, Result};

impl FinitePoset {
    pub(crate) fn up_closure_bits(&self, bits: u64) -> u64 {
        bit_indices(bits).fold(0, |acc, i| acc | self.up_bits(i))
    }

    pub(crate) fn down_closure_bits(&self, bits: u64) -> u64 {
        bit_indices(bits).fold(0, |acc, i| acc | self.down_bits(i))
    }

    pub(crate) fn interior_bits(&self, bits: u64) -> u64 {
        bit_indices(bits)
            .filter(|&i| self.up_bits(i) & !bits == 0)
            .fold(0, |acc, i| acc | 1 << i)
    }

    pub(crate) fn is_open_bits(&self, bits: u64) -> bool {
        self.up_closure_bits(bits) == bits
    }

    /// Minimal open neighbourhood of element `x`.
    pub fn up_set(&self, x: usize) -> Result<SubsetMask> {
        if x >= self.len() {
            return Err(Error::UnknownElement(x.to_string()));
        }
        Ok(SubsetMask::from_bits(self, self.up_bits(x)))
    }

    pub fn up_set_of(&self, label: &str) -> Result<SubsetMask> {
        self.up_set(self.index_of(label)?)
    }

    pub fn down_set(&self, x: usize) -> Result<SubsetMask> {
        if x >= self.len() {
            return Err(Error::UnknownElement(x.to_string()));
        }
        Ok(SubsetMask::from_bits(self, self.down_bits(x)))
    }

    pub fn is_open(&self, a: &SubsetMask) -> Result<bool> {
        a.check_space(self)?;
        Ok(self.is_open_bits(a.bits()))
    }

    pub fn is_closed(&self, a: &SubsetMask) -> Result<bool> {
        a.check_space(self)?;
        Ok(self.down_closure_bits(a.bits()) == a.bits())
    }

    pub fn closure(&self, a: &SubsetMask) -> Result<SubsetMask> {
        a.check_space(self)?;
        Ok(a.with_bits(self.down_closure_bits(a.bits())))
    }

    /// Largest up-set inside `a`.
    pub fn interior(&self, a: &SubsetMask) -> Result<SubsetMask> {
        a.check_space(self)?;
        Ok(a.with_bits(self.interior_bits(a.bits())))
    }

    /// `cl(a) \ int(a)`; for open `a` this is `cl(a) \ a`.
    pub fn boundary(&self, a: &SubsetMask) -> Result<SubsetMask> {
        a.check_space(self)?;
        let bits = self.down_closure_bits(a.bits()) & !self.interior_bits(a.bits());
        Ok(a.with_bits(bits))
    }

    /// Every up-set exactly once, ordered by cardinality and then by the
    /// ascending list of member indices.
    ///
    /// The count can be exponential in the number of elements; callers
    /// exposed to user input should cap the space size first.
    pub fn enumerate_opens(&self) -> std::vec::IntoIter<SubsetMask> {
        let mut out = Vec::new();
        let order: Vec<usize> = self.linear_extension().iter().rev().copied().collect();
        self.collect_up_sets(&order, 0, 0, &mut out);
        out.sort_by_key(|&b| open_order_key(b));
        out.into_iter()
            .map(|bits| SubsetMask::from_bits(self, bits))
            .collect::<Vec<_>>()
            .into_iter()
    }

    // Elements are visited top-down, so when `x` is considered every strict
    // upper bound has already been decided.
    fn collect_up_sets(&self, order: &[usize], pos: usize, acc: u64, out: &mut Vec<u64>) {
        let Some(&x) = order.get(pos) else {
            out.push(acc);
            return;
        };
        self.collect_up_sets(order, pos + 1, acc, out);
        let above = self.up_bits(x) & !(1u64 << x);
        if above & !acc == 0 {
            self.collect_up_sets(order, pos + 1, acc | 1 << x, out);
        }
    }

    /// Iterated removal of isolated points. In a finite Alexandrov space a
    /// point is isolated in a subspace exactly when it is maximal there.
    pub fn derivative_trace(&self) -> DerivativeTrace {
        let mut stages = vec![self.full_bits()];
        let mut current = self.full_bits();
        while current != 0 {
            let isolated = bit_indices(current)
                .filter(|&i| self.up_bits(i) & current == 1 << i)
                .fold(0u64, |acc, i| acc | 1 << i);
            current &= !isolated;
            stages.push(current);
        }
        let mut rank_of = vec![0usize; self.len()];
        for &x in self.linear_extension().iter().rev() {
            rank_of[x] = self
                .upper_covers(x)
                .map(|y| rank_of[y] + 1)
                .max()
                .unwrap_or(0);
        }
        DerivativeTrace {
            stages: stages
                .into_iter()
                .map(|b| SubsetMask::from_bits(self, b))
                .collect(),
            rank_of,
        }
    }

    /// Small inductive dimension. `-1` for the empty space.
    ///
    /// The only open set between `x` and its minimal neighbourhood `up(x)` is
    /// `up(x)` itself, so the dimension is one more than the largest
    /// dimension of a boundary `cl(up(x)) \ up(x)`, each taken as a subspace.
    pub fn dimension(&self) -> i32 {
        let mut memo = HashMap::new();
        self.dimension_bits(self.full_bits(), &mut memo)
    }

    /// Dimension of the subspace carried by `a`.
    pub fn subspace_dimension(&self, a: &SubsetMask) -> Result<i32> {
        a.check_space(self)?;
        let mut memo = HashMap::new();
        Ok(self.dimension_bits(a.bits(), &mut memo))
    }

    fn dimension_bits(&self, space: u64, memo: &mut HashMap<u64, i32>) -> i32 {
        if space == 0 {
            return -1;
        }
        if let Some(&d) = memo.get(&space) {
            return d;
        }
        let mut best = -1;
        for x in bit_indices(space) {
            let nbhd = self.up_bits(x) & space;
            let boundary = self.down_closure_bits(nbhd) & space & !nbhd;
            best = best.max(self.dimension_bits(boundary, memo));
        }
        let d = best + 1;
        memo.insert(space, d);
        d
    }
}

fn open_order_key(bits: u64) -> (u32, Vec<usize>) {
    (bits.count_ones(), bit_indices(bits).collect())
}

/// Cantor-Bendixson stages of a finite space and the per-element rank.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeTrace {
    /// `stages[0]` is the whole space; the last stage is empty.
    pub stages: Vec<SubsetMask>,
    /// `rank_of[x] = sup { rank_of[y] + 1 : x < y }`, zero on maximal points.
    pub rank_of: Vec<usize>,
}

impl DerivativeTrace {
    /// Number of strict derivative steps needed to reach the empty set.
    pub fn scattered_rank(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn is_scattered(&self) -> bool {
        self.stages.last().is_some_and(|s| s.is_empty())
    }
}
