use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("advecting field is not flagged divergence-free")]
    NotDivergenceFree,

    #[error("Hermitian symmetry drift {drift:e} exceeds tolerance {tolerance:e}")]
    HermitianDrift { drift: f64, tolerance: f64 },

    #[error("CFL violation at t = {t}: dt = {dt} exceeds limit {limit} (max |u| = {max_speed})")]
    Cfl {
        t: f64,
        dt: f64,
        limit: f64,
        max_speed: f64,
    },

    #[error("non-finite value detected at t = {t} in {field}")]
    NonFinite { t: f64, field: &'static str },

    #[error("config error for key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("malformed file at byte offset {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("need at least {needed} records, got {got}")]
    InsufficientRecords { needed: usize, got: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for errors raised by the time integrator itself (CFL, NaN).
    pub fn is_numerical_abort(&self) -> bool {
        matches!(
            self,
            Error::Cfl { .. } | Error::NonFinite { .. } | Error::HermitianDrift { .. }
        )
    }
}
