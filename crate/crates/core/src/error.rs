use thiserror::Error;

use crate::ring::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FriezeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("arithmetic across rings {0} and {1}")]
    RingMismatch(Ring, Ring),

    #[error("division by zero")]
    DivisionByZero,

    #[error("arc {0} is not flippable")]
    NotFlippable(String),

    #[error("arc parity undefined for odd polygon size {0}")]
    ParityUndefined(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("value on {arc} is not in the ring")]
    NotIntegral { arc: String },

    #[error("value on {arc} is zero")]
    ZeroLabel { arc: String },

    #[error("two flip routes disagree on {arc}")]
    Inconsistent { arc: String },

    #[error("seed leaves {arc} undetermined")]
    Underdetermined { arc: String },

    #[error("no ear satisfies the norm bound")]
    NoEar,

    #[error("exchange matrix is not of finite type")]
    NotFiniteType,

    /// A result that the theory guarantees did not materialise.
    #[error("internal contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, FriezeError>;
