//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A pair-substitution step was requested on a sequence that is already
    /// terminal (homogeneous or shorter than two symbols).
    #[error("step on terminal sequence")]
    TerminalSequence,

    /// An impurity measure was asked for an empty node.
    #[error("impurity of empty node")]
    EmptyNode,

    /// The parts of a partition do not reassemble the parent label multiset.
    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    /// A label id is not below the declared class count.
    #[error("label {label} out of range for {class_count} classes")]
    LabelOutOfRange { label: u32, class_count: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("no instances in {path}")]
    NoInstances { path: String },

    #[error("unknown label column {column:?} in {path}")]
    UnknownLabelColumn { column: String, path: String },

    /// A feature cell failed to parse as a real number. Rows are 1-based data
    /// rows (the header is row 0).
    #[error("cannot parse {value:?} as a number at row {row}, column {column:?} of {path}")]
    CsvCell {
        path: String,
        row: usize,
        column: String,
        value: String,
    },

    #[error("invalid train/test split: {0}")]
    InvalidSplit(String),

    #[error("invalid instance order: {0}")]
    InvalidOrder(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Prediction input does not match the number of features the model was
    /// trained on.
    #[error("feature count mismatch: model expects {expected}, got {actual}")]
    FeatureCountMismatch { expected: usize, actual: usize },

    #[error("evaluation input mismatch: {0}")]
    EvalMismatch(String),

    #[error("unsupported model document version {0}")]
    UnsupportedVersion(u32),

    #[error("expected a {expected} model document, found {found:?}")]
    WrongModelKind { expected: &'static str, found: String },

    /// Malformed model document; the source error carries line/column.
    #[error("malformed model document: {0}")]
    MalformedDocument(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
