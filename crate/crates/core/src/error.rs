use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover relation contains a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("relation is not transitive: `{0}` <= `{1}` is implied but missing")]
    NotTransitive(String, String),
    #[error("posets are limited to {max} elements, got {got}")]
    TooLarge { got: usize, max: usize },
    #[error("subset or map belongs to a different space")]
    SpaceMismatch,
    #[error("subspace must be nonempty")]
    EmptySubspace,
    #[error("sequence entry {0} is not open")]
    NotOpen(usize),
    #[error("sequence entry {0} does not contain its predecessor")]
    NotIncreasing(usize),
    #[error("partitions use different color counts ({0} vs {1})")]
    ColorCountMismatch(usize, usize),
    #[error("color {color} at element {element} is out of range for k = {k}")]
    ColorOutOfRange { element: usize, color: usize, k: usize },
    #[error("map must have one image per element ({expected}), got {got}")]
    MapArity { expected: usize, got: usize },
    #[error("map target {0} is out of range")]
    MapTarget(usize),
    #[error("map is not monotone")]
    NotMonotone,
    #[error("{what}: {got} exceeds cap {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },
    #[error("subset length {got} does not match space size {expected}")]
    SubsetLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
