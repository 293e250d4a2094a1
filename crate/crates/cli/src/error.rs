use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod code {
    pub const OK: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const INVALID_CURVE: u8 = 3;
    pub const CAPPED: u8 = 4;
    pub const IO: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] levelscope::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: malformed record on line {line}: {msg}")]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(levelscope::Error::InvalidCurve(_)) => code::INVALID_CURVE,
            CliError::Core(levelscope::Error::Resource { .. }) => code::CAPPED,
            CliError::Core(levelscope::Error::Internal(_)) => code::MISMATCH,
            CliError::Core(_) | CliError::Usage(_) | CliError::Format { .. } => code::INPUT,
            CliError::Io { .. } => code::IO,
        }
    }
}
