use std::path::PathBuf;

use regretlab_core::Error as CoreError;

/// Errors surfaced by the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("output directory {dir} holds artifacts for config digest {found}, refusing to overwrite with {expected}")]
    DigestMismatch {
        dir: PathBuf,
        found: String,
        expected: String,
    },
    #[error("verification failed: {0}")]
    Verify(String),
}

pub type LabResult<T> = Result<T, LabError>;

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    /// 1 for configuration problems, 2 for runtime and invariant failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Config(_) | LabError::DigestMismatch { .. } => 1,
            LabError::Core(e) => match e.root() {
                CoreError::Config(_) | CoreError::Size { .. } => 1,
                _ => 2,
            },
            LabError::Io { .. } | LabError::Verify(_) => 2,
        }
    }
}
