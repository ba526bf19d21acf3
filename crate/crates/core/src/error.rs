use thiserror::Error;

/// Errors raised by the library. Verification findings are never errors;
/// they are returned as report entries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: rule has {rule} letters, patch uses {patch}")]
    AlphabetMismatch { rule: usize, patch: usize },

    #[error("index {index} out of range (limit {limit}) in {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("column {0} maps to more than one projected letter")]
    NonConstantColumn(usize),

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("inconsistent boundary constraint: {0}")]
    InconsistentBoundary(String),

    #[error("level {level} is beyond the custom schedule (length {len})")]
    LevelBeyondSchedule { level: usize, len: usize },

    #[error("schedule value at level {0} does not fit in machine arithmetic")]
    ScheduleTooLarge(usize),

    #[error("schedule validation failed: {0}")]
    ScheduleValidation(String),

    #[error("region too narrow: {0}")]
    RegionTooNarrow(String),

    #[error("inconsistent alignments: {0}")]
    InconsistentAlignment(String),

    #[error("flattening needs {estimate} labels, bound is {bound}")]
    FlattenBoundExceeded { estimate: u128, bound: u128 },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("malformed transition table: {0}")]
    MalformedMachine(String),

    #[error("json: {0}")]
    Json(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
