use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("metrics live on different polytopes")]
    PolytopeMismatch,

    #[error("recession violation: {0}")]
    RecessionViolation(String),

    #[error("metric is not semipositive (not convex)")]
    NotSemipositive,

    #[error("operation requires a full-dimensional polytope")]
    LowerDimensional,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("mass mismatch: target mass {target} differs from reference mass {reference}")]
    MassMismatch { target: String, reference: String },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer overflow in exact lattice arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, CoreError>;
