use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("not a permutation of 0..{degree}: {images:?}")]
    NotAPermutation { degree: usize, images: Vec<u32> },
    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("action is not simplicial: {0}")]
    ActionNotSimplicial(String),
    #[error("action is not a group homomorphism: {0}")]
    ActionNotHomomorphism(String),
    #[error("simplex count {needed} exceeds the cap of {cap}")]
    SimplexCapExceeded { cap: usize, needed: usize },
    #[error("generator count {needed} exceeds the cap of {cap}")]
    GeneratorCapExceeded { cap: usize, needed: usize },
    #[error("complexes carry different groups")]
    MismatchedGroups,
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("subcomplex is not invariant: {0}")]
    NotInvariant(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("functor is not well defined: {0}")]
    NotAFunctor(String),
    #[error("scene error: {0}")]
    Scene(String),
}

pub type Result<T> = std::result::Result<T, Error>;
