use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-admissible ideal: {0}")]
    NonAdmissible(String),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search space too large: {0}")]
    CapExceeded(String),
    /// The idempotent search could neither split the module nor prove it local.
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;
