//! Closed-form kernel of the half-line spectral projection.
//!
//! For `n != m` the kernel `K_b(m, n) = int_{-1}^{b} p_m p_n dmu` collapses to
//!
//! ```text
//! (1-b)^(alpha+1) (1+b)^(beta+1) [p_n(b) p_m'(b) - p_n'(b) p_m(b)] / (lambda_n - lambda_m)
//! ```
//!
//! which costs O(1) per entry once the polynomial values at `b` are known; the
//! eigenvalue gap is computed as `(n - m)(n + m + alpha + beta + 1)` to avoid
//! cancellation for large nearby indices. Diagonal entries have no closed form
//! and are integrated numerically. At `b = 1` the prefactor vanishes and the
//! kernel is the identity; at `b = -1` it vanishes entirely.

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::quadrature::{self, check_interval, gauss_jacobi_rule, NODE_BUDGET};
use std::io::{self, Write};

/// One kernel row `{K_[a,b](m, n)}_{n < trunc}` with its geometry.
#[derive(Debug, Clone)]
pub struct KernelSlice {
    params: JacobiParams,
    m: usize,
    a: f64,
    b: f64,
    values: Vec<f64>,
}

impl KernelSlice {
    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Interval endpoints `(a, b)`.
    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn trunc(&self) -> usize {
        self.values.len()
    }

    /// Largest `|K(m, n)| * |m - n|` over the slice: the observed constant in
    /// the `1/|m - n|` decay bound.
    pub fn empirical_decay_constant(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(n, _)| *n != self.m)
            .map(|(n, v)| v.abs() * (n as f64 - self.m as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Writes the slice as CSV: a comment header recording the geometry, then
    /// `n,value` rows at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# kernel alpha={:.16e} beta={:.16e} a={:.16e} b={:.16e} m={} trunc={}",
            self.params.alpha(),
            self.params.beta(),
            self.a,
            self.b,
            self.m,
            self.trunc()
        )?;
        writeln!(out, "n,value")?;
        for (n, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{:.16e}", n, v)?;
        }
        Ok(())
    }
}

fn check_b(b: f64) -> Result<()> {
    if b.is_finite() && (-1.0..=1.0).contains(&b) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: b,
            domain: "[-1, 1]",
        })
    }
}

fn check_b_open(b: f64) -> Result<()> {
    if b.is_finite() && b > -1.0 && b < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: b,
            domain: "(-1, 1)",
        })
    }
}

/// Off-diagonal closed-form entry from precomputed polynomial data at `b`:
/// `values` and `derivatives` hold `p_k(b)` and `p_k'(b)`, `prefactor` comes
/// from [`prefactor`], and `param_sum = alpha + beta`. This is the O(1) bulk
/// route used when many entries share one evaluation point.
#[inline]
pub fn closed_entry(
    prefactor: f64,
    param_sum: f64,
    values: &[f64],
    derivatives: &[f64],
    m: usize,
    n: usize,
) -> f64 {
    debug_assert_ne!(m, n);
    let gap = (n as f64 - m as f64) * (n as f64 + m as f64 + param_sum + 1.0);
    prefactor * (values[n] * derivatives[m] - derivatives[n] * values[m]) / gap
}

/// The factor `(1-b)^(alpha+1) (1+b)^(beta+1)` of the closed form.
pub fn prefactor(params: &JacobiParams, b: f64) -> f64 {
    (1.0 - b).powf(params.alpha() + 1.0) * (1.0 + b).powf(params.beta() + 1.0)
}

/// Half-line kernel entry `K_b(m, n)`; the diagonal is integrated to `tol`.
pub fn halfline(params: &JacobiParams, b: f64, m: usize, n: usize, tol: f64) -> Result<f64> {
    check_b(b)?;
    if b == 1.0 {
        return Ok(if m == n { 1.0 } else { 0.0 });
    }
    if b == -1.0 {
        return Ok(0.0);
    }
    if m == n {
        return halfline_diagonal(params, b, n, tol);
    }
    let values = [
        params.orthonormal_unchecked(m, b),
        params.orthonormal_unchecked(n, b),
    ];
    let derivatives = [
        params.orthonormal_derivative_unchecked(m, b),
        params.orthonormal_derivative_unchecked(n, b),
    ];
    let gap = (n as f64 - m as f64) * (n as f64 + m as f64 + params.alpha() + params.beta() + 1.0);
    Ok(prefactor(params, b) * (values[1] * derivatives[0] - derivatives[1] * values[0]) / gap)
}

/// Interval kernel entry `K_[a,b](m, n) = K_b(m, n) - K_a(m, n)`.
pub fn interval(
    params: &JacobiParams,
    a: f64,
    b: f64,
    m: usize,
    n: usize,
    tol: f64,
) -> Result<f64> {
    check_interval(a, b)?;
    Ok(halfline(params, b, m, n, tol)? - halfline(params, a, m, n, tol)?)
}

/// Diagonal entry `K_b(n, n) = int_{-1}^{b} p_n^2 dmu`.
///
/// Delegates to the batched ladder so that a value is bit-identical whether it
/// is computed alone or as part of a batch (the persistent cache relies on
/// this).
pub fn halfline_diagonal(params: &JacobiParams, b: f64, n: usize, tol: f64) -> Result<f64> {
    Ok(halfline_diagonal_batch(params, b, n + 1, tol)?[n])
}

/// Diagonal entries `K_b(n, n)` for `n < len`, sharing one recurrence sweep per
/// quadrature node.
///
/// The weight-adapted endpoint rule doubles from a fixed start; each entry
/// freezes at the first rung where its two latest estimates agree to `tol`, so
/// the value of entry `n` does not depend on `len`.
pub fn halfline_diagonal_batch(
    params: &JacobiParams,
    b: f64,
    len: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    check_b(b)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance { tol });
    }
    if len == 0 {
        return Ok(Vec::new());
    }
    if b == 1.0 {
        return Ok(vec![1.0; len]);
    }
    if b == -1.0 {
        return Ok(vec![0.0; len]);
    }

    let alpha = params.alpha();
    let half = 0.5 * (1.0 + b);
    let scale = half.powf(params.beta() + 1.0);
    let mapped = JacobiParams::new(0.0, params.beta())?;
    let norms = params.normalization_family(len);

    let mut result = vec![0.0; len];
    let mut frozen = vec![false; len];
    let mut prev: Option<Vec<f64>> = None;
    let mut raw = vec![0.0; len];
    let mut k = quadrature::EDGE_LADDER_START;
    loop {
        let top = frozen.iter().rposition(|f| !f).expect("unfrozen entry") + 1;
        let rule = gauss_jacobi_rule(&mapped, k)?;
        let mut cur = vec![0.0; top];
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let x = -1.0 + (1.0 + t) * half;
            params.unnormalized_family_into_unchecked(x, &mut raw[..top]);
            let factor = w * scale * (1.0 - x).powf(alpha);
            for (i, slot) in cur.iter_mut().enumerate() {
                if !frozen[i] {
                    let p = norms[i] * raw[i];
                    *slot += factor * p * p;
                }
            }
        }
        let mut remaining = 0usize;
        let mut worst = 0.0f64;
        let mut worst_val = f64::NAN;
        if let Some(pv) = &prev {
            for i in 0..top {
                if frozen[i] {
                    continue;
                }
                let change = (cur[i] - pv[i]).abs();
                if change <= tol {
                    frozen[i] = true;
                    result[i] = cur[i];
                } else {
                    remaining += 1;
                    if change >= worst {
                        worst = change;
                        worst_val = cur[i];
                    }
                }
            }
        } else {
            remaining = top;
        }
        if remaining == 0 {
            return Ok(result);
        }
        if 2 * k > NODE_BUDGET {
            return Err(Error::ToleranceNotReached {
                tol,
                budget: NODE_BUDGET,
                best: worst_val,
                change: worst,
            });
        }
        prev = Some(cur);
        k *= 2;
    }
}

fn analytic_row(m: usize, trunc: usize, identity: bool) -> Vec<f64> {
    let mut values = vec![0.0; trunc];
    if identity && m < trunc {
        values[m] = 1.0;
    }
    values
}

/// The row `{K_b(m, n)}_{n < trunc}`.
pub fn halfline_row(
    params: &JacobiParams,
    b: f64,
    m: usize,
    trunc: usize,
    tol: f64,
) -> Result<KernelSlice> {
    check_b(b)?;
    if trunc == 0 {
        return Err(Error::EmptySequence);
    }
    let values = if b == 1.0 {
        analytic_row(m, trunc, true)
    } else if b == -1.0 {
        analytic_row(m, trunc, false)
    } else {
        let len = trunc.max(m + 1);
        let vals = params.orthonormal_family(b, len)?;
        let ders = params.orthonormal_derivative_family(b, len)?;
        let pref = prefactor(params, b);
        let sum = params.alpha() + params.beta();
        let mut values: Vec<f64> = (0..trunc)
            .map(|n| {
                if n == m {
                    0.0
                } else {
                    closed_entry(pref, sum, &vals, &ders, m, n)
                }
            })
            .collect();
        if m < trunc {
            values[m] = halfline_diagonal(params, b, m, tol)?;
        }
        values
    };
    Ok(KernelSlice {
        params: *params,
        m,
        a: -1.0,
        b,
        values,
    })
}

/// The row `{K_[a,b](m, n)}_{n < trunc}`.
pub fn interval_row(
    params: &JacobiParams,
    a: f64,
    b: f64,
    m: usize,
    trunc: usize,
    tol: f64,
) -> Result<KernelSlice> {
    check_interval(a, b)?;
    let upper = halfline_row(params, b, m, trunc, tol)?;
    let lower = halfline_row(params, a, m, trunc, tol)?;
    let values = upper
        .values
        .iter()
        .zip(&lower.values)
        .map(|(u, l)| u - l)
        .collect();
    Ok(KernelSlice {
        params: *params,
        m,
        a,
        b,
        values,
    })
}

/// Edge weight multiplying polynomial values in the fast decomposition:
/// `(1-b)^(alpha/2+1/4) (1+b)^(beta/2+1/4) p_n(b)`.
pub fn value_edge_weight(params: &JacobiParams, b: f64, n: usize) -> Result<f64> {
    check_b_open(b)?;
    let pref =
        (1.0 - b).powf(0.5 * params.alpha() + 0.25) * (1.0 + b).powf(0.5 * params.beta() + 0.25);
    Ok(pref * params.orthonormal_unchecked(n, b))
}

/// Values of [`value_edge_weight`] for `n < len`.
pub fn value_edge_weight_family(params: &JacobiParams, b: f64, len: usize) -> Result<Vec<f64>> {
    check_b_open(b)?;
    let pref =
        (1.0 - b).powf(0.5 * params.alpha() + 0.25) * (1.0 + b).powf(0.5 * params.beta() + 0.25);
    let mut vals = params.orthonormal_family(b, len)?;
    for v in &mut vals {
        *v *= pref;
    }
    Ok(vals)
}

/// Edge weight multiplying scaled derivatives:
/// `(1-b)^(alpha/2+3/4) (1+b)^(beta/2+3/4) p_n'(b) / (2n + alpha + beta + 1)`.
pub fn derivative_edge_weight(params: &JacobiParams, b: f64, n: usize) -> Result<f64> {
    check_b_open(b)?;
    let pref =
        (1.0 - b).powf(0.5 * params.alpha() + 0.75) * (1.0 + b).powf(0.5 * params.beta() + 0.75);
    let divisor = 2.0 * n as f64 + params.alpha() + params.beta() + 1.0;
    Ok(pref * params.orthonormal_derivative_unchecked(n, b) / divisor)
}

/// Values of [`derivative_edge_weight`] for `n < len`.
pub fn derivative_edge_weight_family(
    params: &JacobiParams,
    b: f64,
    len: usize,
) -> Result<Vec<f64>> {
    check_b_open(b)?;
    let pref =
        (1.0 - b).powf(0.5 * params.alpha() + 0.75) * (1.0 + b).powf(0.5 * params.beta() + 0.75);
    let mut ders = params.orthonormal_derivative_family(b, len)?;
    for (n, d) in ders.iter_mut().enumerate() {
        *d *= pref / (2.0 * n as f64 + params.alpha() + params.beta() + 1.0);
    }
    Ok(ders)
}

/// Truncated edge factor
/// `[(1-b)/((1-b) + 1/(n+1)^2)]^r [(1+b)/((1+b) + 1/(n+1)^2)]^s`, in `(0, 1]`.
pub fn truncated_edge_factor(r: f64, s: f64, b: f64, n: usize) -> f64 {
    debug_assert!(b > -1.0 && b < 1.0 && r >= 0.0 && s >= 0.0);
    let q = 1.0 / ((n as f64 + 1.0) * (n as f64 + 1.0));
    ((1.0 - b) / (1.0 - b + q)).powf(r) * ((1.0 + b) / (1.0 + b + q)).powf(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_measure, DEFAULT_TOL};
    use proptest::prelude::*;

    const PAIRS: [(f64, f64); 4] = [(-0.5, -0.5), (0.0, 0.0), (0.5, 0.5), (0.0, 1.3)];

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn halfline_example_value() {
        let p = JacobiParams::legendre();
        let got = halfline(&p, 0.0, 0, 1, DEFAULT_TOL).unwrap();
        assert!((got + 3f64.sqrt() / 4.0).abs() < 1e-14, "{got}");
    }

    #[test]
    fn halfline_at_endpoints() {
        let p = params(0.5, 1.3);
        for m in 0..4 {
            for n in 0..4 {
                let at_one = halfline(&p, 1.0, m, n, DEFAULT_TOL).unwrap();
                assert_eq!(at_one, if m == n { 1.0 } else { 0.0 });
                assert_eq!(halfline(&p, -1.0, m, n, DEFAULT_TOL).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn halfline_is_symmetric_bitwise() {
        for &(a, b) in &PAIRS {
            let p = params(a, b);
            for bval in [-0.9, -0.3, 0.0, 0.4, 0.95] {
                for m in [0usize, 1, 4, 17] {
                    for n in [2usize, 3, 9, 30] {
                        if m == n {
                            continue;
                        }
                        let left = halfline(&p, bval, m, n, DEFAULT_TOL).unwrap();
                        let right = halfline(&p, bval, n, m, DEFAULT_TOL).unwrap();
                        assert_eq!(left, right, "b={bval} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn interval_examples() {
        let p = JacobiParams::legendre();
        // full interval is the identity
        for (m, n) in [(0usize, 0usize), (3, 3), (2, 7)] {
            let got = interval(&p, -1.0, 1.0, m, n, DEFAULT_TOL).unwrap();
            assert_eq!(got, if m == n { 1.0 } else { 0.0 });
        }
        // degenerate interval vanishes
        assert_eq!(interval(&p, 0.3, 0.3, 2, 5, DEFAULT_TOL).unwrap(), 0.0);
        // orthogonality forces the [0, 1] entry to mirror the [-1, 0] one
        let got = interval(&p, 0.0, 1.0, 0, 1, DEFAULT_TOL).unwrap();
        assert!((got - 3f64.sqrt() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_agrees_with_quadrature() {
        // spot-check here; the acceptance suite runs the full grid
        for &(a, b) in &[(0.0, 0.0), (0.5, 1.3)] {
            let p = params(a, b);
            for bval in [-0.5, 0.5] {
                for (m, n) in [(0usize, 1usize), (2, 5), (7, 3)] {
                    let closed = halfline(&p, bval, m, n, DEFAULT_TOL).unwrap();
                    let quad = integrate_measure(
                        &p,
                        |x| p.orthonormal_unchecked(m, x) * p.orthonormal_unchecked(n, x),
                        -1.0,
                        bval,
                        DEFAULT_TOL,
                    )
                    .unwrap();
                    assert!(
                        (closed - quad).abs() < 1e-10,
                        "alpha={a} beta={b} b={bval} ({m},{n}): {closed} vs {quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_single_equals_batch() {
        let p = params(0.5, 1.3);
        let batch = halfline_diagonal_batch(&p, 0.4, 12, DEFAULT_TOL).unwrap();
        for (n, &v) in batch.iter().enumerate() {
            let single = halfline_diagonal(&p, 0.4, n, DEFAULT_TOL).unwrap();
            assert_eq!(single, v, "n={n}");
        }
    }

    #[test]
    fn diagonal_matches_independent_quadrature() {
        for &(a, b) in &PAIRS {
            let p = params(a, b);
            for bval in [-0.99, -0.4, 0.0, 0.7, 0.99] {
                let batch = halfline_diagonal_batch(&p, bval, 8, DEFAULT_TOL).unwrap();
                for (n, &v) in batch.iter().enumerate() {
                    let oracle = integrate_measure(
                        &p,
                        |x| p.orthonormal_unchecked(n, x).powi(2),
                        -1.0,
                        bval,
                        DEFAULT_TOL,
                    )
                    .unwrap();
                    assert!(
                        (v - oracle).abs() <= 2.0 * DEFAULT_TOL + 1e-13,
                        "alpha={a} beta={b} b={bval} n={n}: {v} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_monotone_and_bounded() {
        let p = params(0.5, 0.5);
        let grid = [-0.95, -0.5, 0.0, 0.5, 0.95];
        for n in [0usize, 3, 10] {
            let mut prev = 0.0;
            for &bval in &grid {
                let v = halfline_diagonal(&p, bval, n, DEFAULT_TOL).unwrap();
                assert!((0.0..=1.0 + 1e-12).contains(&v), "n={n} b={bval}: {v}");
                assert!(v >= prev - 1e-12, "n={n}: not monotone at b={bval}");
                prev = v;
            }
        }
    }

    #[test]
    fn rows_match_entries() {
        let p = params(0.0, 1.3);
        let slice = interval_row(&p, -0.3, 0.8, 3, 16, DEFAULT_TOL).unwrap();
        for n in 0..16 {
            let want = interval(&p, -0.3, 0.8, 3, n, DEFAULT_TOL).unwrap();
            assert_eq!(slice.values()[n], want, "n={n}");
        }
        assert!(slice.empirical_decay_constant().is_finite());
    }

    #[test]
    fn slice_csv_shape() {
        let p = JacobiParams::legendre();
        let slice = halfline_row(&p, 0.0, 1, 4, DEFAULT_TOL).unwrap();
        let mut buf = Vec::new();
        slice.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# kernel alpha="));
        assert_eq!(lines.next().unwrap(), "n,value");
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn edge_weight_examples() {
        let p = JacobiParams::legendre();
        assert!((value_edge_weight(&p, 0.0, 0).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(value_edge_weight(&p, 0.0, 1).unwrap(), 0.0);
        assert_eq!(derivative_edge_weight(&p, 0.0, 0).unwrap(), 0.0);
        assert!((derivative_edge_weight(&p, 0.0, 1).unwrap() - 1.5f64.sqrt() / 3.0).abs() < 1e-15);
        assert!(value_edge_weight(&p, 1.0, 0).is_err());
    }

    #[test]
    fn edge_weights_stay_bounded() {
        for &(a, b) in &PAIRS {
            let p = params(a, b);
            let mut sup_r = 0.0f64;
            let mut sup_big = 0.0f64;
            for i in 0..40 {
                let bval = -0.999 + 1.998 * i as f64 / 39.0;
                let rv = value_edge_weight_family(&p, bval, 500).unwrap();
                let dv = derivative_edge_weight_family(&p, bval, 500).unwrap();
                sup_r = sup_r.max(rv.iter().fold(0.0f64, |m, v| m.max(v.abs())));
                sup_big = sup_big.max(dv.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            }
            assert!(
                sup_r.is_finite() && sup_r < 5.0,
                "alpha={a} beta={b}: {sup_r}"
            );
            assert!(
                sup_big.is_finite() && sup_big < 5.0,
                "alpha={a} beta={b}: {sup_big}"
            );
        }
    }

    #[test]
    fn truncated_edge_factor_examples() {
        assert_eq!(truncated_edge_factor(0.0, 0.0, 0.3, 7), 1.0);
        let p = params(0.5, 1.3);
        for n in [0usize, 5, 100] {
            for bval in [-0.9, 0.0, 0.9] {
                let v = truncated_edge_factor(p.alpha() + 1.0, p.beta() + 1.0, bval, n);
                assert!(v > 0.0 && v <= 1.0, "n={n} b={bval}: {v}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Product law: exponents add.
        #[test]
        fn truncated_edge_factor_product_law(
            r1 in 0.0f64..3.0, s1 in 0.0f64..3.0,
            r2 in 0.0f64..3.0, s2 in 0.0f64..3.0,
            b in -0.99f64..0.99, n in 0usize..200,
        ) {
            let lhs = truncated_edge_factor(r1, s1, b, n) * truncated_edge_factor(r2, s2, b, n);
            let rhs = truncated_edge_factor(r1 + r2, s1 + s2, b, n);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        /// Kernel decay: |K_b(m, n)| * |m - n| stays below a moderate constant.
        #[test]
        fn halfline_decay(b in -0.95f64..0.95, m in 0usize..60, n in 0usize..60) {
            prop_assume!(m != n);
            let p = JacobiParams::new(0.0, 0.0).unwrap();
            let v = halfline(&p, b, m, n, DEFAULT_TOL).unwrap();
            prop_assert!(v.abs() * (m as f64 - n as f64).abs() < 10.0);
        }
    }
}
