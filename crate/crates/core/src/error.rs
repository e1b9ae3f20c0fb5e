use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank deficient")]
    RankDeficient,
    #[error("singular matrix")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not an isometry")]
    NotAnIsometry,
    #[error("not a sublattice")]
    NotSublattice,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("incomplete pool: complete up to {have}, need {needed}")]
    IncompletePool { have: u64, needed: u64 },
    #[error("guard rail exceeded: {0}")]
    GuardExceeded(String),
    #[error("denominator bound violated: {0}")]
    DenominatorBound(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
