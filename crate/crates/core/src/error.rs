use thiserror::Error;

/// Errors raised by the algebra, level and curve routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),

    #[error("{0} is not an odd prime below 2^31")]
    NotOddPrime(u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("context mismatch: {0}")]
    Context(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("resource budget `{budget}` exceeded: needed {needed}, limit {limit}")]
    Resource {
        budget: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
