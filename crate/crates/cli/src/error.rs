use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver error ({kind}): {source}", kind = source.kind())]
    Solver {
        #[from]
        source: ewmt_core::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Unwritable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver { .. } => 3,
            CliError::Unwritable { .. } => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
