use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Input { path: PathBuf, line: u64, message: String },
    #[error("cannot read {path}: {source}")]
    Unreadable { path: PathBuf, source: std::io::Error },
    #[error("internal: {0}")]
    Internal(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 usage, 3 input data, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input { .. } | CliError::Unreadable { .. } => 3,
            CliError::Internal(_) | CliError::Write { .. } => 4,
        }
    }
}

impl From<uavg_core::Error> for CliError {
    fn from(e: uavg_core::Error) -> Self {
        use uavg_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::BranchOutOfRange { .. } | E::OutOfValidity { .. } | E::MalformedCurve(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
