use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const VERIFY_FAILED: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, configuration keys or values. Raised before any output is
    /// written.
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] membrane_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Numerical(_) | CliError::Io { .. } | CliError::Csv(_) => exit::NUMERICAL,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
