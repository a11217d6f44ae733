use std::path::{Path, PathBuf};

use thiserror::Error;

/// Errors surfaced by the screening pipeline and its validation stack.
#[derive(Debug, Error)]
pub enum GbefError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("FCIDUMP parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numerical consistency check failed: {0}")]
    Numerical(String),

    #[error("optimizer failure: {message} (at theta = {theta:?})")]
    Optimizer { message: String, theta: Vec<f64> },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("metadata error in {}: {message}", path.display())]
    Metadata { path: PathBuf, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = GbefError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> GbefError {
    GbefError::InvalidInput(msg.into())
}

pub(crate) fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> GbefError + '_ {
    move |source| GbefError::Io { path: path.to_path_buf(), source }
}
