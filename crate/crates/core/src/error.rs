use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in cyclotomic field")]
    DivisionByZero,

    #[error("value is not a rational integer: {0}")]
    NotRational(String),

    #[error("rational but not integral: {0}")]
    NotIntegral(String),

    #[error("element of Q(zeta_{from}) does not lie in Q(zeta_{to})")]
    NotInSubfield { from: u32, to: u32 },

    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),

    #[error("exponent does not match virtual dimension: r*N = {lhs}, vdim = {rhs}")]
    DegreeMismatch { lhs: i128, rhs: i128 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("calibration failure: {0}")]
    Calibration(String),

    #[error("float backend residual too large: {0}")]
    FloatResidual(String),

    #[error("polynomiality violated: {0}")]
    Polynomiality(String),

    #[error("d normalization did not stabilize within {cap} bumps")]
    Stabilization { cap: u32 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Config(err.to_string())
    }
}
