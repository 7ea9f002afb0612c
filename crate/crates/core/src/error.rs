use std::path::PathBuf;

use desc_autograd::TensorError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("sentiment score {0} outside -5..=5")]
    ScoreOutOfRange(i64),

    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{source_name} line {line}: {reason}")]
    MalformedRow {
        source_name: String,
        line: usize,
        reason: String,
    },

    #[error("embedding line {line} has {found} values, expected {expected}")]
    InconsistentDimension {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{0} contains no entries")]
    EmptyFile(String),

    #[error("tf-idf needs a non-empty corpus")]
    EmptyCorpus,

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error("input sequence {0} is empty")]
    EmptySequence(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),

    #[error("F1 score {0} outside [0, 1]")]
    OutOfRangeF1(f64),

    #[error("class {class} has {count} samples, fewer than {folds} folds")]
    TooFewSamplesPerClass {
        class: usize,
        count: usize,
        folds: usize,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("metric input is empty")]
    EmptyInput,

    #[error("ROC analysis needs both classes present")]
    SingleClassInput,

    #[error("class {0} has no documents")]
    EmptyClass(usize),

    #[error("unsupported {kind} version {found} (expected {expected})")]
    UnsupportedVersion {
        kind: &'static str,
        found: u32,
        expected: u32,
    },

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}
