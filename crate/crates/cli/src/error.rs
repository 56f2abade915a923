use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error in {path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error in field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numerical(#[from] wvbound::Error),

    #[error("{0}")]
    Violation(String),
}

impl CliError {
    /// 0 success, 1 invariant violation or numerical failure, 2 usage/parse/input errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) | CliError::Numerical(_) => 1,
            CliError::Parse { .. } | CliError::Validation { .. } | CliError::Usage(_) | CliError::Io { .. } => 2,
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
