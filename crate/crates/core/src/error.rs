//! Error taxonomy shared by every module.
//!
//! Two broad classes matter to callers (the CLI maps them to distinct exit
//! codes): *validation* errors — bad arguments, violated preconditions,
//! malformed files — and *numerical* errors — a grid too coarse for the
//! requested quantity, or a computation that failed to converge.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation
    /// (e.g. evaluating a modulus at t ≤ 0 or t > its cap).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A perturbation amplitude produced a degenerate geometry.
    #[error("amplitude error: {0}")]
    Amplitude(String),

    /// The grid is too coarse to evaluate the requested quantity.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A numerical procedure failed to converge or produced non-finite
    /// values where finite ones were required.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Malformed input text (CSV grids, JSON configs).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors of the numerical/resolution class; false for
    /// validation-class errors. The CLI exits 2 for the former, 1 for the
    /// latter.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Resolution(_) | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
