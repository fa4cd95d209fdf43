use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeckeError {
    #[error("not invertible")]
    NotInvertible,

    #[error("cap exceeded: {what} passed {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("support cap {cap} exceeded; support sizes {trajectory:?}")]
    SupportCapExceeded { cap: usize, trajectory: Vec<usize> },

    #[error("block dimension mismatch: {left} vs {right}")]
    BlockDimMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expectation not invertible; apply convex averaging")]
    ExpectationNotInvertible,

    #[error("not a fundamental domain: orbit {orbit:?} meets F {hits} times")]
    NotFundamentalDomain { orbit: Vec<usize>, hits: usize },

    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
