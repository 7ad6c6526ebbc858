use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(filippov_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<filippov_core::Error> for CliError {
    /// Invalid inputs are configuration errors; everything else is numerical.
    fn from(e: filippov_core::Error) -> Self {
        use filippov_core::Error as E;
        match e {
            E::InvalidParams { .. }
            | E::UnknownParam(_)
            | E::InvalidOption(..)
            | E::InvalidState { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
