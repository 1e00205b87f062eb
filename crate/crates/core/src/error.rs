//! Error type shared across the crate.
//!
//! Errors are grouped into the classes the CLI maps to exit codes: usage
//! errors (2), parse errors (3) and capacity errors (4).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("{0}")]
    Usage(String),

    /// Malformed graph text or scenario file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input exceeds a size cap of an exact solver or checker.
    #[error("{0}")]
    Capacity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    /// Process exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Parse { .. } | Error::Io(_) => 3,
            Error::Capacity(_) => 4,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), msg: e.to_string() }
    }
}
