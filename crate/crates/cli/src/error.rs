use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] qnls_core::Error),

    #[error("{0}")]
    Aborted(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 validation or parse, 2 singularity abort, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Core(qnls_core::Error::Singularity { .. }) | CliError::Aborted(_) => 2,
            CliError::Core(_) => 1,
            CliError::Io { .. } => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
