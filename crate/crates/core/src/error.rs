use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Even angular sectors (or other sectors) that an operation does not handle.
    #[error("unsupported sector ell = {0}")]
    UnsupportedSector(u32),

    /// Quadrature or iteration exhausted its budget before meeting the tolerance.
    #[error("accuracy not reached: best estimate {best} with error estimate {error}")]
    Accuracy { best: f64, error: f64 },

    /// A root bracket that does not straddle a sign change.
    #[error("bracket [{lo}, {hi}] does not contain a sign change")]
    Bracket { lo: f64, hi: f64 },

    /// Profiles or grids that do not fit together.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid configuration value or tag.
    #[error("config error: {0}")]
    Config(String),

    /// Eigensolver or other numerical breakdown.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
