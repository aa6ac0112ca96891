use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index n = {n} is below the first defined index {min} for order k = {k}")]
    IndexOutOfRange { k: u32, n: i64, min: i64 },

    #[error("order k = {k} is invalid (need k >= {min})")]
    InvalidOrder { k: u32, min: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("ambiguous continued fraction quotient after {certified} certified quotients")]
    AmbiguousQuotient { certified: usize },

    #[error("no convergent gave a positive epsilon after {tries} attempts")]
    NoPositiveEpsilon { tries: usize },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("mismatch: left side {lhs} != right side {rhs}")]
    Mismatch { lhs: String, rhs: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
