use hol_arith::ArithError;
use hol_local::LocalError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobalError {
    #[error("invariants sum to {0} modulo Z, not 0")]
    BrauerSum(String),
    #[error("denominator of the invariant at {place} does not divide d = {d}")]
    Denominator { place: String, d: u32 },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("orders are not comparable: {0}")]
    NotComparable(String),
    #[error("the torsor is empty: {0}")]
    EmptyTorsor(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, GlobalError>;
