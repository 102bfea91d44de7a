use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("constant input: {0}")]
    ConstantInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("record for editor {record} applied to profile of {profile}")]
    EditorMismatch { profile: String, record: String },

    #[error("record dated {record} precedes profile update {last}")]
    TimeRegression { last: String, record: String },

    #[error("stream is not sorted by date at index {0}")]
    Unsorted(usize),

    #[error("feature space mismatch: expected {expected} features, got {actual}")]
    FeatureMismatch { expected: usize, actual: usize },

    #[error("linear system is singular")]
    Singular,

    #[error("model has not seen any training data")]
    NotTrained,

    #[error("unsupported checkpoint version {0}")]
    Version(u32),
}
