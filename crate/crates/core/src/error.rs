use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unstable (g, n) = ({g}, {n}): 2g - 2 + n must be positive")]
    Unstable { g: i64, n: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("store integrity violation: {0}")]
    Integrity(String),

    #[error("store read error at line {line}: {reason}")]
    StoreRead { line: usize, reason: String },

    #[error("refused: {0}")]
    Refused(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
