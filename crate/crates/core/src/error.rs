//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element encoding {value} out of range for field of order {q}")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("division by zero in field of order {0}")]
    DivisionByZero(u32),
    #[error("mismatched fields: order {0} vs order {1}")]
    MismatchedField(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not strictly upper-triangular")]
    NotStrictlyUpper,
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid gap array: {0}")]
    InvalidGapArray(String),
    #[error("enumeration budget exceeded: {0} elements > 2^{1} (pass the override to proceed)")]
    BudgetExceeded(String, u32),
    #[error("inexact division: {0} not divisible by {1}")]
    InexactDivision(String, String),
    #[error("duplicate interpolation point q={0}")]
    DuplicatePoint(u64),
    #[error("insufficient points: got {got}, need {need} for an over-determined fit")]
    InsufficientPoints { got: usize, need: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
