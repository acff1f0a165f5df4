use thiserror::Error;

/// Errors raised by constructions and solvers.
///
/// Certified negative answers (a failed Kan check, a violated identity) are
/// reported through certificates and verdicts, never through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("budget exceeded while {what} (limit {limit})")]
    Budget { what: String, limit: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("dimension {requested} exceeds truncation {max_dim}")]
    Truncation { requested: usize, max_dim: usize },
    #[error("{0}")]
    Failed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
