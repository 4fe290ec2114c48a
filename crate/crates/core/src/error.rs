use thiserror::Error;

/// Errors surfaced by the matrix kernel and the inverse/solver layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    /// Float backend only: a candidate pivot fell inside the ambiguous band
    /// around the rank threshold, so the rank decision is not trustworthy.
    #[error("rank ambiguity: pivot magnitude {pivot:e} lies within [{low:e}, {high:e}]")]
    RankAmbiguity { pivot: f64, low: f64, high: f64 },

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("outer inverse with the prescribed range and null space does not exist")]
    OuterInverseNonexistent,

    #[error("subspaces are not complementary: {0}")]
    NotComplementary(String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("Jordan basis unavailable; supply P explicitly ({0})")]
    JordanUnavailable(String),

    #[error("internal verification failure: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
