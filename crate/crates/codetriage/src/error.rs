//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A dataset file that is not a JSON array of records, or similar.
    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    /// A single bad record inside an otherwise readable dataset file.
    #[error("record {index}: {reason}")]
    MalformedRecord { index: usize, reason: String },

    #[error("duplicate snippet id {id}")]
    DuplicateId { id: String },

    #[error("unknown label {label:?}")]
    UnknownLabel { label: String },

    #[error("unknown snippet id {id}")]
    UnknownId { id: String },

    #[error("class {label:?} has fewer than {min} samples")]
    ClassTooSmall { label: String, min: usize },

    #[error("no mutation operator targets label {label:?}")]
    NoOperatorForLabel { label: String },

    #[error("clean pool holds {pool} snippets but {needed} are needed per class")]
    PoolTooSmall { pool: usize, needed: usize },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("vocabulary is empty after document-frequency filtering")]
    EmptyVocabulary,

    #[error("feature vector has dimension {got} but the model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: {truth} truth labels vs {predicted} predictions")]
    LengthMismatch { truth: usize, predicted: usize },

    #[error("missing model artifact {name}")]
    MissingArtifact { name: String },

    #[error("{name}: unsupported format version {found} (expected {expected})")]
    FormatVersion {
        name: String,
        found: u64,
        expected: u64,
    },

    #[error("{name}: {reason}")]
    CorruptArtifact { name: String, reason: String },

    #[error("{0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from how the tool was invoked or configured,
    /// as opposed to a failure encountered while doing the work.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::UnknownLabel { .. }
                | Error::ClassTooSmall { .. }
                | Error::PoolTooSmall { .. }
                | Error::NoOperatorForLabel { .. }
        )
    }
}
