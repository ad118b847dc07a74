//! Wadge reducibility, difference-hierarchy levels, inductive dimension and
//! degree structures for subsets and k-partitions of finite T0 spaces.
//!
//! A finite T0 space is the same thing as a finite poset carrying the
//! Alexandrov topology (open sets are the up-sets). Continuous maps are the
//! monotone maps, so every question here reduces to finite combinatorics on
//! the order.

pub mod degrees;
mod error;
pub mod gallery;
pub mod hierarchy;
pub mod io;
pub mod iso;
pub mod poset;
pub mod reduce;
pub mod sample;
mod subset;
mod topology;
pub mod verify;

pub use degrees::{
    all_partitions, all_subsets, degree_structure, max_antichain, structure_label, DegreeClass,
    DegreeStructure, Diagnostics, Naming, StructureReport,
};
pub use error::{Error, Result};
pub use hierarchy::{
    classify, classify_with_witnesses, d_n, longest_alternating_chain, oracle_level,
    AlternatingChain, Classification, DiffLevel, LevelLabel,
};
pub use iso::{canonical_form, poset_isomorphic, posets_up_to_iso, CanonicalForm};
pub use poset::{FinitePoset, SpaceId};
pub use reduce::{
    degree_embedding_check, is_monotone, is_retraction, partition_reduces, partition_reduces_with,
    wadge_reduces, EmbeddingReport, KPartition, MonotoneMap, ReducibilityKind, SelfMap,
};
pub use subset::SubsetMask;
pub use topology::DerivativeTrace;

/// Largest supported space; subsets are stored as `u64` bit masks.
pub const MAX_ELEMENTS: usize = 64;
