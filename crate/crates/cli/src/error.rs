use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] plusrank_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corrupt cache entry {}: {source}", path.display())]
    Corrupt { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    /// 2 for bad input, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        use plusrank_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                E::InvalidArgument(_)
                | E::UnsupportedWeight { .. }
                | E::NotFundamental { .. }
                | E::BadDiscriminantCongruence { .. }
                | E::IndexOutOfRange(_),
            ) => 2,
            _ => 3,
        }
    }
}
