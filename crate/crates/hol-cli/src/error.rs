use hol_arith::ArithError;
use hol_global::GlobalError;
use hol_local::LocalError;
use hol_special::SpecialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Global(#[from] GlobalError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

fn local_exit(e: &LocalError) -> i32 {
    match e {
        LocalError::PrecisionFailure(_) | LocalError::BudgetExceeded(_) => EXIT_BUDGET,
        _ => EXIT_VALIDATION,
    }
}

impl CliError {
    /// Precision and enumeration-budget failures map to 3, everything else to 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Local(e) | CliError::Global(GlobalError::Local(e)) | CliError::Special(SpecialError::Local(e)) => {
                local_exit(e)
            }
            _ => EXIT_VALIDATION,
        }
    }
}
