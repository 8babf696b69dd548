use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] orlicz_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 2 for anything the user can fix in the config or flags, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use orlicz_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Core(E::Configuration(_) | E::Parse { .. }) => 2,
            _ => 1,
        }
    }
}

pub fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
