use std::path::PathBuf;

use desc_core::CoreError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{} line {line}: {reason}", path.display())]
    MalformedRow { path: PathBuf, line: usize, reason: String },

    #[error("{} line {line}: duplicate id {id:?}", path.display())]
    DuplicateId { path: PathBuf, line: usize, id: String },

    #[error("{} line {line}: cannot parse label {label:?}", path.display())]
    UnparseableLabel { path: PathBuf, line: usize, label: String },

    #[error("missing artifact {}", .0.display())]
    MissingArtifact(PathBuf),

    #[error("artifact {} does not match the manifest: {reason}", path.display())]
    VersionMismatch { path: PathBuf, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] CoreError),
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
