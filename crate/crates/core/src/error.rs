use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero {index} has modulus {modulus} which is not below the cap {cap}")]
    ZeroOutsideDisk {
        index: usize,
        modulus: f64,
        cap: f64,
    },

    #[error("point {0} is within 1e-14 of a pole")]
    PoleProximity(String),

    #[error("root solver did not converge: residual {residual:e} after {iterations} iterations")]
    ConvergenceFailure { residual: f64, iterations: usize },

    #[error("requested band |k| <= {band} needs more than {grid} grid nodes")]
    BandTooWide { band: i64, grid: usize },

    #[error("dimension {0} is too large for tensor quadrature (max 3); use the symbolic multiplier classification")]
    DimensionTooLarge(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("multi-index {0:?} lies outside the box of the explicit index set")]
    SupportOutsideBox(Vec<u32>),

    #[error("precondition failed: {what} (measured {measured:e}, tolerance {tolerance:e})")]
    Precondition {
        what: String,
        measured: f64,
        tolerance: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
