use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigErrors;

/// Process exit status for each failure class.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },
    #[error("invalid config:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error("{0}")]
    Core(#[from] lsiib_core::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::ConfigRead { .. } | RunError::Config(_) => exit::CONFIG,
            RunError::Core(e) if e.is_precondition() => exit::PRECONDITION,
            RunError::Core(_) | RunError::Output { .. } => exit::NUMERICAL,
        }
    }
}
