use std::path::PathBuf;

use stieltjes_realize::{Error, ErrorKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cli: {0}")]
    Job(String),
    #[error("cli: cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cli: cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn job(msg: impl Into<String>) -> Self {
        CliError::Job(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.kind() == ErrorKind::Numerical => 3,
            _ => 2,
        }
    }
}
