use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {message}")]
    Input { path: PathBuf, line: u64, message: String },

    #[error(transparent)]
    Core(#[from] lsabr_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("reading config: {0}")]
    ConfigRead(#[from] toml::de::Error),

    #[error("rendering config: {0}")]
    ConfigWrite(#[from] toml::ser::Error),

    /// Results were produced but some fits did not converge.
    #[error("{0} calibration day(s) hit the iteration limit")]
    NotConverged(usize),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::ConfigRead(_) => 2,
            CliError::Core(lsabr_core::Error::NonConvergence { .. }) | CliError::NotConverged(_) => 4,
            CliError::Core(_) => 3,
            CliError::Io { .. } | CliError::Csv(_) | CliError::ConfigWrite(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
