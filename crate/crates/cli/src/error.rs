use thiserror::Error;

use verma_ext_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("could not write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },

    #[error("verification failed in suite(s) {0}")]
    Verification(String),
}

impl CliError {
    /// 1 usage or configuration, 2 domain, 3 verification failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Write { .. } => 1,
            CliError::Verification(_) => 3,
            CliError::Core(e) => match e {
                CoreError::NotComparable { .. }
                | CoreError::Parse(_)
                | CoreError::IndexOutOfRange { .. }
                | CoreError::RankMismatch { .. } => 2,
                CoreError::LiftingViolation(_) | CoreError::Invariant(_) => 3,
                _ => 1,
            },
        }
    }
}
