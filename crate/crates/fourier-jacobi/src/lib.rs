//! Discrete Fourier-Jacobi interval multipliers.
//!
//! Given a parameter pair `(alpha, beta)` with `alpha, beta > -1`, the
//! orthonormal Jacobi polynomials `p_n` diagonalize a classical second-order
//! operator on `[-1, 1]`. Restricting the associated "frequency" variable to a
//! window `[a, b]` of that interval defines a spectral projection acting on
//! sequences,
//!
//! ```text
//! T f(n) = sum_m f(m) K(m, n),   K(m, n) = integral over [a, b] of p_m p_n dmu,
//! ```
//!
//! and this crate computes it two independent ways: by direct summation of the
//! closed-form kernel, and by a five-term decomposition into discrete Hilbert
//! and Hankel-type transforms with edge-weight multipliers, which runs in
//! `O(N log N)` via FFT. Supporting machinery includes Gauss-Jacobi quadrature,
//! weighted sequence norms, discrete Muckenhoupt constants, and experiment
//! drivers that exhibit the recovery behaviour of the projection as the window
//! fills the interval: errors vanish for exponents `1 < p < inf` while the
//! `l^1` operator norms grow logarithmically.
//!
//! The `examples/` directory contains one runnable program per capability; the
//! `fourier-jacobi` binary exposes the same operations as subcommands.

pub mod cli;
pub mod error;
pub mod experiments;
mod fft;
pub mod jacobi;
pub mod kernel;
pub mod multiplier;
pub mod quadrature;
pub mod seq_ops;

pub use error::{Error, Result};
pub use experiments::{ExperimentReport, FitResult};
pub use jacobi::JacobiParams;
pub use kernel::KernelSlice;
pub use multiplier::{ConvergenceMeasurement, DiagonalCache, MultiplierSpec};
pub use quadrature::QuadratureRule;
pub use seq_ops::{EvalMode, FiniteSequence, WeightSeq};
