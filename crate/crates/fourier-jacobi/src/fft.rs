//! FFT helpers for circular convolution and correlation of real sequences.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

fn padded(values: &[f64], len: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); len];
    for (slot, &v) in out.iter_mut().zip(values) {
        slot.re = v;
    }
    out
}

/// Circular convolution of length `len`: `z(n) = sum_j x(j) y((n - j) mod len)`.
pub(crate) fn circular_convolve(x: &[f64], y: &[f64], len: usize) -> Vec<f64> {
    debug_assert!(x.len() <= len && y.len() <= len);
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);
    let mut bx = padded(x, len);
    let mut by = padded(y, len);
    forward.process(&mut bx);
    forward.process(&mut by);
    for (u, v) in bx.iter_mut().zip(&by) {
        *u *= v;
    }
    inverse.process(&mut bx);
    let scale = 1.0 / len as f64;
    bx.iter().map(|c| c.re * scale).collect()
}

/// Circular correlation of length `len`: `z(n) = sum_j x(j) y((j + n) mod len)`.
pub(crate) fn circular_correlate(x: &[f64], y: &[f64], len: usize) -> Vec<f64> {
    debug_assert!(x.len() <= len && y.len() <= len);
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);
    let mut bx = padded(x, len);
    let mut by = padded(y, len);
    forward.process(&mut bx);
    forward.process(&mut by);
    for (u, v) in bx.iter_mut().zip(&by) {
        *u = u.conj() * v;
    }
    inverse.process(&mut bx);
    let scale = 1.0 / len as f64;
    bx.iter().map(|c| c.re * scale).collect()
}
