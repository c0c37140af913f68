use hol_local::LocalError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Local(#[from] LocalError),
}

pub type Result<T> = std::result::Result<T, SpecialError>;
