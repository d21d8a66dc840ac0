use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is not a fundamental discriminant")]
    NotFundamental { value: i64 },

    #[error("{m} is not of the form -m = 0 or 1 mod 4")]
    BadDiscriminantCongruence { m: u64 },

    #[error("unsupported weight {weight}: {reason}")]
    UnsupportedWeight { weight: i64, reason: &'static str },

    #[error("insufficient precision: need order {needed}, have {available}")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("series expansion impossible: {0}")]
    NotInvertible(String),

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("malformed data: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
