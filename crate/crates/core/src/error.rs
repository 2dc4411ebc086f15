use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("matrix entry at row {row}, column {column} is not finite")]
    NonFiniteEntry { row: usize, column: usize },

    #[error("target sum must be finite and strictly positive, got {0}")]
    InvalidTargetSum(f64),

    #[error("tolerance must be finite and strictly positive, got {0}")]
    InvalidTolerance(f64),

    #[error("support size {size} is outside 1..={len}")]
    SupportSizeOutOfRange { size: usize, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("oracle enumeration limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },

    /// A coordinate of the projection came out negative beyond the rounding
    /// window that is snapped to zero.
    #[error("coordinate {index} of the projection is {value:e}, below the rounding window")]
    ClampViolation { index: usize, value: f64 },

    #[error("intermediate sums overflowed the floating-point range")]
    Overflow,
}
