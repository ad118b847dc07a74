use std::fmt;

use crate::poset::{FinitePoset, SpaceId};
use crate::{Error, Result};

/// Membership vector over the elements of one space.
///
/// Elements are stored as bits of a `u64` in element-index order, so a space
/// holds at most [`crate::MAX_ELEMENTS`] points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    space: SpaceId,
    len: usize,
    bits: u64,
}

pub(crate) fn full_bits(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

pub(crate) fn bit_indices(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

impl SubsetMask {
    pub(crate) fn from_raw(space: SpaceId, len: usize, bits: u64) -> Self {
        SubsetMask {
            space,
            len,
            bits: bits & full_bits(len),
        }
    }

    pub fn empty(space: &FinitePoset) -> Self {
        Self::from_raw(space.id(), space.len(), 0)
    }

    pub fn full(space: &FinitePoset) -> Self {
        Self::from_raw(space.id(), space.len(), u64::MAX)
    }

    /// Bits beyond the space size are discarded.
    pub fn from_bits(space: &FinitePoset, bits: u64) -> Self {
        Self::from_raw(space.id(), space.len(), bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(space: &FinitePoset, indices: I) -> Result<Self> {
        let mut bits = 0u64;
        for i in indices {
            if i >= space.len() {
                return Err(Error::UnknownElement(i.to_string()));
            }
            bits |= 1 << i;
        }
        Ok(Self::from_bits(space, bits))
    }

    pub fn from_labels<S: AsRef<str>>(space: &FinitePoset, labels: &[S]) -> Result<Self> {
        let indices = labels
            .iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, indices)
    }

    pub fn from_bools(space: &FinitePoset, flags: &[bool]) -> Result<Self> {
        if flags.len() != space.len() {
            return Err(Error::SubsetLength {
                expected: space.len(),
                got: flags.len(),
            });
        }
        let bits = flags
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        Ok(Self::from_bits(space, bits))
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_bits(self.len)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.bits >> i & 1 == 1
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.bits)
    }

    pub fn complement(&self) -> Self {
        Self::from_raw(self.space, self.len, !self.bits)
    }

    pub(crate) fn with_bits(&self, bits: u64) -> Self {
        Self::from_raw(self.space, self.len, bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.with_bits(self.bits | other.bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.with_bits(self.bits & other.bits)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.with_bits(self.bits & !other.bits)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    /// 0/1 string in element-index order.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    pub fn labels<'a>(&self, space: &'a FinitePoset) -> Vec<&'a str> {
        self.indices().map(|i| space.label(i)).collect()
    }

    pub(crate) fn check_space(&self, space: &FinitePoset) -> Result<()> {
        if self.space == space.id() && self.len == space.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl serde::Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bit_string())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({})", self.to_bit_string())
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}
