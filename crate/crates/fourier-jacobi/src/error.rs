//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction checks, domain validation, quadrature,
/// eigenvalue iteration, and parsing of external inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Jacobi parameters alpha={alpha}, beta={beta}: both must be finite and > -1")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error(
        "parameters alpha={alpha}, beta={beta} outside the standard range alpha, beta >= -1/2"
    )]
    OutsideStandardRange { alpha: f64, beta: f64 },

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("invalid interval [{a}, {b}]: need -1 <= a <= b <= 1")]
    InvalidInterval { a: f64, b: f64 },

    #[error("exponent p={p} is not supported: need p >= 1")]
    InvalidExponent { p: f64 },

    #[error("invalid tolerance {tol}: must be finite and > 0")]
    InvalidTolerance { tol: f64 },

    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("sequence must contain at least one value")]
    EmptySequence,

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("weight at index {index} is not strictly positive")]
    NonPositiveWeight { index: usize },

    #[error(
        "quadrature did not reach tolerance {tol:e} within the {budget}-node budget \
         (best estimate {best:e}, last change {change:e})"
    )]
    ToleranceNotReached {
        tol: f64,
        budget: usize,
        best: f64,
        change: f64,
    },

    #[error("tridiagonal eigenvalue iteration failed to converge at index {index} after {iterations} sweeps")]
    EigenFailure { index: usize, iterations: usize },

    #[error("degenerate regression input: {0}")]
    DegenerateFit(&'static str),

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Whether the error reports a numerical failure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotReached { .. } | Error::EigenFailure { .. }
        )
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
