//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its domain (negative rate, fraction out of range, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A computation was requested outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The linearized dynamics is unstable where a stable system is required.
    #[error("unstable dynamics: slowest eigenvalue has Re = {max_re} rad/s >= 0")]
    Unstable { max_re: f64 },

    /// A quantity needed to fix a phase or ratio vanished.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Linear solve hit a (numerically) singular matrix.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// Assembled Gaussian state violates a physicality bound.
    #[error("unphysical state: {0}")]
    Unphysical(String),

    /// Constrained search found no feasible point.
    #[error("empty feasible set: no stable point satisfies the constraints")]
    EmptyFeasibleSet,

    /// Configuration file failed schema validation.
    #[error("config validation: {0}")]
    Validation(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
