use thiserror::Error;

/// Error type shared by the whole library.
///
/// The CLI maps variants to exit codes: input problems exit 2, budget
/// exhaustion exits 3, certificate violations exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("budget exceeded in {op}: {detail}")]
    BudgetExceeded { op: &'static str, detail: String },

    #[error("coarsening stalled: {0}")]
    CoarseningStalled(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("certificate violation: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::Certificate(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
