use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, outside 1 ± {tolerance}")]
    RowSumOutOfTolerance {
        row: usize,
        sum: f64,
        tolerance: f64,
    },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("length mismatch: expected {expected} labels, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("weight count mismatch: {weights} weights for {members} members")]
    WeightCountMismatch { weights: usize, members: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid concentration parameter {0}; must be finite and > 0")]
    InvalidAlpha(f64),

    #[error("member set is empty")]
    EmptyMemberSet,

    #[error("class {class} has no samples")]
    EmptyClass { class: usize },

    #[error("class {class} would leave no training samples")]
    DegenerateSplit { class: usize },

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("label {value} out of range for {classes} classes")]
    OutOfRange { value: usize, classes: usize },

    #[error("inconsistent shapes for member `{member}`: {detail}")]
    InconsistentShapes { member: String, detail: String },

    #[error("unsupported format version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A structural error raised while reading a specific line of a file.
    #[error("{}:{line}: {source}", path.display())]
    AtLine {
        path: PathBuf,
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn at_line(self, path: impl Into<PathBuf>, line: usize) -> Self {
        Error::AtLine {
            path: path.into(),
            line,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with file/line context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } | Error::InFile { source, .. } => source.root(),
            other => other,
        }
    }
}
