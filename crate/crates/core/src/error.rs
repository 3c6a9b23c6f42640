//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible matrix/vector dimensions.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A caller-supplied argument is out of its valid domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A linear system could not be solved even after regularisation.
    #[error("singular system: {0}")]
    Singular(String),

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// A CSV cell could not be parsed. Row numbers are 1-based data rows
    /// (the header does not count).
    #[error("ingestion error at row {row}, column '{column}': {message}")]
    Ingestion {
        row: usize,
        column: String,
        message: String,
    },

    /// Schema file or header problems.
    #[error("schema error: {0}")]
    Schema(String),

    /// A categorical value that cannot be mapped to a code.
    #[error("encoding error: {0}")]
    Encoding(String),

    /// Preprocessing removed every feature.
    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    /// A reference set (training rows, background sample) is unusable.
    #[error("data error: {0}")]
    Data(String),

    /// Training diverged.
    #[error("training error at epoch {epoch}: {message}")]
    Training { epoch: usize, message: String },

    /// An operation was asked to run on an unsupported model architecture.
    #[error("capability error: {0}")]
    Capability(String),

    /// Numerical failure that survived all fallbacks.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Malformed persisted artifact (model file, processed CSV, ...).
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
