use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("invalid numerical input: {0}")]
    NumericalInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("size mismatch: {left} vs {right} nodes")]
    SizeMismatch { left: usize, right: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown {kind} `{name}` (valid: {})", valid.join(", "))]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: Vec<&'static str>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io { .. } => 2,
            Error::Parameter(_)
            | Error::UnsupportedInput(_)
            | Error::SizeMismatch { .. }
            | Error::Precondition(_)
            | Error::Input(_)
            | Error::InsufficientData(_) => 3,
            Error::NumericalInput(_) | Error::NumericalFailure(_) => 4,
            Error::UnknownName { .. } => 5,
        }
    }
}
