//! Orthonormal Jacobi polynomials and their elementary quantities.
//!
//! The family `p_n = w_n P_n` is orthonormal on `[-1, 1]` with respect to
//! `(1 - x)^alpha (1 + x)^beta dx`. Evaluation uses the forward three-term
//! recurrence (stable on `[-1, 1]`), normalization constants are computed in
//! log space so that degrees up to about `10^6` do not overflow, and the
//! large-degree oscillatory approximation is available on `(0, pi/2]`.

use crate::error::{Error, Result};
use libm::lgamma;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

/// Lower end of the validity range of [`JacobiParams::asymptotic_approx`]:
/// the approximation is accepted for `theta > ASYMPTOTIC_DELTA / n`.
pub const ASYMPTOTIC_DELTA: f64 = 1.0;

/// Parameter pair `(alpha, beta)` of a Jacobi family; both entries exceed -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: x,
            domain: "[-1, 1]",
        })
    }
}

/// One step of the forward recurrence: computes `P_k` from `P_{k-1}`, `P_{k-2}`.
#[inline]
fn recurrence_next(alpha: f64, beta: f64, k: usize, x: f64, prev: f64, prev2: f64) -> f64 {
    let kf = k as f64;
    let c = 2.0 * kf + alpha + beta;
    let num = (c - 1.0) * ((c * (c - 2.0)) * x + (alpha - beta) * (alpha + beta)) * prev
        - 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c * prev2;
    num / (2.0 * kf * (kf + alpha + beta) * (c - 2.0))
}

impl JacobiParams {
    /// Creates a parameter pair, rejecting values outside `(-1, inf)`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0 {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidParams { alpha, beta })
        }
    }

    /// The Legendre case `alpha = beta = 0`.
    pub fn legendre() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True iff `alpha >= -1/2` and `beta >= -1/2`. Multiplier operators
    /// require this range by default.
    pub fn standard_range(&self) -> bool {
        self.alpha >= -0.5 && self.beta >= -0.5
    }

    /// The pair with `alpha` and `beta` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Eigenvalue `n (n + alpha + beta + 1)` of the associated second-order
    /// differential operator.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let nf = n as f64;
        nf * (nf + self.alpha + self.beta + 1.0)
    }

    fn degree_one(&self, x: f64) -> f64 {
        0.5 * (self.alpha + self.beta + 2.0) * x + 0.5 * (self.alpha - self.beta)
    }

    /// Unnormalized Jacobi polynomial `P_n(x)` for `x` in `[-1, 1]`.
    pub fn unnormalized(&self, n: usize, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.unnormalized_unchecked(n, x))
    }

    pub(crate) fn unnormalized_unchecked(&self, n: usize, x: f64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let mut prev2 = 1.0;
        let mut prev = self.degree_one(x);
        for k in 2..=n {
            let next = recurrence_next(self.alpha, self.beta, k, x, prev, prev2);
            prev2 = prev;
            prev = next;
        }
        prev
    }

    /// Fills `out[k] = P_k(x)` for `k = 0 .. out.len()` in one recurrence sweep.
    pub fn unnormalized_family_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_x(x)?;
        self.unnormalized_family_into_unchecked(x, out);
        Ok(())
    }

    pub(crate) fn unnormalized_family_into_unchecked(&self, x: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = self.degree_one(x);
        for k in 2..out.len() {
            out[k] = recurrence_next(self.alpha, self.beta, k, x, out[k - 1], out[k - 2]);
        }
    }

    /// Normalization constant `w_n` making `w_n P_n` orthonormal.
    ///
    /// Computed as `exp` of a half-difference of log-gamma values; safe for
    /// degrees far beyond the onset of `Gamma` overflow.
    pub fn normalization(&self, n: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        let log_w = if n == 0 {
            0.5 * (lgamma(a + b + 2.0) - (a + b + 1.0) * LN_2 - lgamma(a + 1.0) - lgamma(b + 1.0))
        } else {
            let nf = n as f64;
            0.5 * ((2.0 * nf + a + b + 1.0).ln() + lgamma(nf + 1.0) + lgamma(nf + a + b + 1.0)
                - (a + b + 1.0) * LN_2
                - lgamma(nf + a + 1.0)
                - lgamma(nf + b + 1.0))
        };
        log_w.exp()
    }

    /// Vector of normalization constants `w_0 .. w_{len-1}`.
    pub fn normalization_family(&self, len: usize) -> Vec<f64> {
        (0..len).map(|n| self.normalization(n)).collect()
    }

    /// Orthonormal Jacobi polynomial `p_n(x) = w_n P_n(x)`.
    pub fn orthonormal(&self, n: usize, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.orthonormal_unchecked(n, x))
    }

    pub(crate) fn orthonormal_unchecked(&self, n: usize, x: f64) -> f64 {
        self.normalization(n) * self.unnormalized_unchecked(n, x)
    }

    /// Values `p_0(x) .. p_{len-1}(x)`.
    pub fn orthonormal_family(&self, x: f64, len: usize) -> Result<Vec<f64>> {
        check_x(x)?;
        let mut out = vec![0.0; len];
        self.unnormalized_family_into_unchecked(x, &mut out);
        for (n, v) in out.iter_mut().enumerate() {
            *v *= self.normalization(n);
        }
        Ok(out)
    }

    /// Derivative `p_n'(x)`, via `P_n' = (n + alpha + beta + 1)/2 * P_{n-1}`
    /// of the parameter pair shifted by one.
    pub fn orthonormal_derivative(&self, n: usize, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.orthonormal_derivative_unchecked(n, x))
    }

    pub(crate) fn orthonormal_derivative_unchecked(&self, n: usize, x: f64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let shifted = Self {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        };
        let factor = 0.5 * (n as f64 + self.alpha + self.beta + 1.0);
        self.normalization(n) * (factor * shifted.unnormalized_unchecked(n - 1, x))
    }

    /// Values `p_0'(x) .. p_{len-1}'(x)`.
    pub fn orthonormal_derivative_family(&self, x: f64, len: usize) -> Result<Vec<f64>> {
        check_x(x)?;
        let mut out = vec![0.0; len];
        if len <= 1 {
            return Ok(out);
        }
        let shifted = Self {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        };
        let mut lower = vec![0.0; len - 1];
        shifted.unnormalized_family_into_unchecked(x, &mut lower);
        for n in 1..len {
            let factor = 0.5 * (n as f64 + self.alpha + self.beta + 1.0);
            out[n] = self.normalization(n) * (factor * lower[n - 1]);
        }
        Ok(out)
    }

    /// Piecewise envelope for `|p_n|`, without the unknown uniform constant:
    /// `(n+1)^(alpha+1/2)` on the right edge band, the algebraic middle-band
    /// profile in between, `(n+1)^(beta+1/2)` on the left edge band.
    pub fn envelope_bound(&self, n: usize, x: f64) -> Result<f64> {
        check_x(x)?;
        let np1 = n as f64 + 1.0;
        let cut = 1.0 / (np1 * np1);
        if x > 1.0 - cut {
            Ok(np1.powf(self.alpha + 0.5))
        } else if x < -1.0 + cut {
            Ok(np1.powf(self.beta + 0.5))
        } else {
            Ok((1.0 - x).powf(-0.5 * self.alpha - 0.25) * (1.0 + x).powf(-0.5 * self.beta - 0.25))
        }
    }

    /// Two-term oscillatory approximation of `2^((alpha+beta+1)/2) p_n(cos theta)`
    /// for `ASYMPTOTIC_DELTA / n < theta <= pi/2`:
    ///
    /// `A (sin t/2)^-(a+1/2) (cos t/2)^-(b+1/2) [cos(N t - phi) + sin(N t - phi)/(N t)]`
    ///
    /// with `N = n + (alpha+beta+1)/2`, `phi = (2 alpha + 1) pi / 4`, and
    /// amplitude `A = sqrt(2/pi)`.
    pub fn asymptotic_approx(&self, n: usize, theta: f64) -> Result<f64> {
        if !(theta.is_finite() && theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::OutOfDomain {
                value: theta,
                domain: "(0, pi/2]",
            });
        }
        if n == 0 || theta <= ASYMPTOTIC_DELTA / n as f64 {
            return Err(Error::OutOfDomain {
                value: theta,
                domain: "(delta/n, pi/2]",
            });
        }
        let big_n = n as f64 + 0.5 * (self.alpha + self.beta + 1.0);
        let phase = big_n * theta - (2.0 * self.alpha + 1.0) * FRAC_PI_4;
        let amplitude = (2.0 / PI).sqrt();
        let half = 0.5 * theta;
        let profile = half.sin().powf(-(self.alpha + 0.5)) * half.cos().powf(-(self.beta + 0.5));
        Ok(amplitude * profile * (phase.cos() + phase.sin() / (big_n * theta)))
    }
}
