use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Verification failed, or the searched key is absent.
    pub const NEGATIVE: i32 = 1;
    pub const UNSORTED: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const INTERNAL: i32 = 70;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: line {line} is out of order (pass --sort to sort the keys)")]
    Unsorted { path: PathBuf, line: usize },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error("benchmark precheck failed: {0}")]
    Precheck(String),
    #[error(transparent)]
    Tree(#[from] flatbst::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unsorted { .. } => exit::UNSORTED,
            CliError::Read { .. } | CliError::Malformed { .. } => exit::INPUT,
            CliError::Write { .. } | CliError::Precheck(_) => exit::INTERNAL,
            CliError::Usage(_) => exit::USAGE,
            CliError::Tree(flatbst::Error::Capacity { .. } | flatbst::Error::ZeroWorkers) => {
                exit::USAGE
            }
            CliError::Tree(_) => exit::INTERNAL,
        }
    }
}
