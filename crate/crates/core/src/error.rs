use thiserror::Error;

use crate::poly::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("(1/{sub})Z is not a subgroup of (1/{sup})Z")]
    NotSubgroup { sub: u64, sup: u64 },
    #[error("divisor must be monic and nonconstant")]
    BadDivisor,
    #[error("level {level} out of range for a chain of {len} levels")]
    LevelOutOfRange { level: usize, len: usize },
    #[error("a MacLane chain needs at least one level")]
    EmptyChain,
    #[error("degree {deg} of F is not a multiple of m_r = {m}")]
    DegreeMismatch { deg: usize, m: usize },
    #[error("F has degree {0}; invariants need degree at least 2")]
    DegreeTooSmall(usize),
    #[error("F must be monic")]
    NotMonic,
    #[error("chain is not valid: {0}")]
    InvalidChain(String),
    #[error("inconsistent invariants: {0}")]
    Inconsistent(String),
    #[error("value out of machine range: {0}")]
    Overflow(String),
    #[error("precondition failed: {0}")]
    Contract(String),
}
