use hol_arith::ArithError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, LocalError>;
