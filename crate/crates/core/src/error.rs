use thiserror::Error;

/// Errors raised by the counting toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid prime: {0}")]
    InvalidPrime(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("point is not an S-integer: {0}")]
    NotSInteger(String),
    #[error("refusing to enumerate: projected {projected} candidates exceeds ceiling {ceiling}")]
    ResourceLimit { projected: u128, ceiling: u128 },
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("comparison could not be resolved: {0}")]
    Unresolved(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("outside the asymptotic regime: {0}")]
    Regime(String),
    #[error("partition identity violated: {0}")]
    PartitionMismatch(String),
    #[error("zero has infinite valuation")]
    InfiniteValuation,
    #[error("exact arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
