use thiserror::Error;

/// Errors produced by the projection routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("infeasible instance: no {delta}-separated support of size {k} exists in dimension {d}")]
    Infeasible { d: usize, k: usize, delta: usize },
    #[error("instance too large for exhaustive enumeration: d = {d} exceeds cap {cap}")]
    InstanceTooLarge { d: usize, cap: usize },
    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
    #[error("iteration limit of {0} exceeded")]
    IterationLimitExceeded(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
