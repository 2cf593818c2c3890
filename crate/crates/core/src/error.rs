use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CuError {
    #[error("invalid object: {0}")]
    Invalid(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("generator {0} is not positive; its ideal need not exist")]
    NonPositiveGenerator(String),
    #[error("objects live in different ambient semigroups")]
    AmbientMismatch,
    #[error("the morphism does not kill the ideal: it sends {0} to a nonzero element")]
    PreimageCondition(String),
    #[error("positive directedness is required: {0}")]
    PdRequired(String),
}

pub type Result<T, E = CuError> = std::result::Result<T, E>;
