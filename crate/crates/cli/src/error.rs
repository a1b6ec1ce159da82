use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ddfrac::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("specimen failed at step {step}")]
    SpecimenFailed { step: usize },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use ddfrac::Error as E;
        match self {
            CliError::Config(_) => 3,
            CliError::Core(e) => match e.root() {
                E::InvalidParameter { .. } | E::Domain { .. } | E::Bracketing { .. } => 3,
                E::DatasetExhausted { .. } => 4,
                E::ScheduleMismatch { .. } => 5,
                _ => 6,
            },
            CliError::Io { .. } => 6,
            CliError::SpecimenFailed { .. } => 7,
        }
    }
}
