use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("{0} is not invertible: its H^0 part is zero")]
    NotInvertible(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("stream too short: need {needed} coefficients, have {have}")]
    Truncation { needed: usize, have: usize },

    #[error("truncation insufficient: last term not negligible, need about M = {required}")]
    TruncationInsufficient { required: usize },

    #[error("lattice enumeration exceeded cap of {cap} points in degree {degree}")]
    EnumerationCap { degree: usize, cap: usize },

    #[error("precision exhausted at m = {m}: cancellation ratio {ratio:.3e}")]
    PrecisionLoss { m: usize, ratio: f64 },

    #[error("scaled coefficient underflowed at m = {m}")]
    Underflow { m: usize },

    #[error("no nonzero limit detected: {0}")]
    NoLimit(String),

    #[error("presentation check failed: {0}")]
    Presentation(String),

    #[error("numeric quality: {0}")]
    Quality(String),

    #[error("config: {0}")]
    Config(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for invalid input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionLoss { .. }
            | Error::Underflow { .. }
            | Error::NoLimit(_)
            | Error::Presentation(_)
            | Error::Quality(_)
            | Error::TruncationInsufficient { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
