use std::path::Path;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: files, flags or data the engines reject. Exit code 1.
    #[error("{0}")]
    Input(String),

    /// A consistency check inside the tool failed. Exit code 2.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn at(row: usize, column: usize, message: impl std::fmt::Display) -> Self {
        CliError::Input(format!("row {row}, column {column}: {message}"))
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<conformal_core::Error> for CliError {
    fn from(e: conformal_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
