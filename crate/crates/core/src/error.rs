use std::fmt;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// The combination of parameters is outside the implemented model families.
    #[error("unsupported case: {0}")]
    Unsupported(String),
    /// A closed-form resolution has a non-positive quantity under its square root.
    #[error("resolution undefined: {0}")]
    UndefinedResolution(String),
    /// Scalar minimization could not find any descent direction.
    #[error("no descent found on [{lo}, {hi}]")]
    FlatFunction { lo: f64, hi: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl fmt::Display) -> Error {
    Error::Input(msg.to_string())
}

pub(crate) fn unsupported(msg: impl fmt::Display) -> Error {
    Error::Unsupported(msg.to_string())
}
