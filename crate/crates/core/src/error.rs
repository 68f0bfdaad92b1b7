use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polytope is not full-dimensional (ambient {ambient}, affine dimension {actual})")]
    NotFullDimensional { ambient: usize, actual: usize },

    #[error("{what} budget exceeded (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("{what}: size {size} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("relation has a cycle through elements {0:?}")]
    Cycle(Vec<usize>),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),

    #[error("dilation factor must be positive")]
    ZeroDilation,

    #[error("polytope does not contain the origin")]
    OriginNotContained,

    #[error("binomial {0} is not in the toric ideal")]
    NotInKernel(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
