use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),

    #[error("simulation at epsilon {epsilon} aborted: {source}")]
    Numerical {
        epsilon: f64,
        #[source]
        source: fschro_core::Error,
    },

    #[error(transparent)]
    Core(#[from] fschro_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 config, 3 numerical abort, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Numerical { .. } => 3,
            LabError::Core(fschro_core::Error::NumericalAbort { .. }) => 3,
            LabError::Core(_) => 2,
            LabError::Io { .. } => 4,
        }
    }
}
