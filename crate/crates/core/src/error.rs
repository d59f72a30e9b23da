use thiserror::Error;

/// Errors raised by the numerical routines and validators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("range error: level {level} not attained on [{lo}, {hi}] (T(lo) = {t_lo}, T(hi) = {t_hi})")]
    Range {
        level: f64,
        lo: f64,
        hi: f64,
        t_lo: f64,
        t_hi: f64,
    },
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
