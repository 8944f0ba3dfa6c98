//! Gauss-Jacobi quadrature and integration against `(1-x)^alpha (1+x)^beta dx`.
//!
//! Rules come from the Golub-Welsch construction: nodes are the eigenvalues of
//! the symmetric tridiagonal recurrence matrix, weights come from the squared
//! first eigenvector components scaled by the total measure. Subinterval
//! integration adapts the rule to the geometry: endpoint-touching intervals use
//! a weight-adapted rule on the singular side with the smooth weight factor
//! folded into the integrand (no cancellation as `b -> 1`), interior intervals
//! use composite Gauss-Legendre panels with the full weight folded in. Node
//! counts double until two successive estimates agree to the tolerance.

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use libm::lgamma;
use std::f64::consts::LN_2;

/// Default absolute tolerance for integration.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Maximum number of nodes an adaptive integration may spend.
pub const NODE_BUDGET: usize = 1 << 15;

/// Fixed order of the per-panel rule in composite interior integration.
const COMPOSITE_ORDER: usize = 32;

/// First rung of the node-doubling ladder on full-interval rules.
const FULL_LADDER_START: usize = 16;

/// First rung of the node-doubling ladder on endpoint-touching rules. Shared
/// with the kernel-diagonal batch so that single and batched diagonal values
/// are computed by the identical rule sequence.
pub(crate) const EDGE_LADDER_START: usize = 32;

/// A positive quadrature rule with nodes inside `(-1, 1)`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exact_degree: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Highest polynomial degree integrated exactly (`2k - 1` for `k` nodes).
    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule: `sum_i w_i f(x_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Total measure `int_{-1}^{1} dmu = 2^(alpha+beta+1) B(alpha+1, beta+1)`.
pub fn total_measure(params: &JacobiParams) -> f64 {
    let (a, b) = (params.alpha(), params.beta());
    ((a + b + 1.0) * LN_2 + lgamma(a + 1.0) + lgamma(b + 1.0) - lgamma(a + b + 2.0)).exp()
}

/// Diagonal and subdiagonal of the `k x k` symmetric recurrence matrix.
fn recurrence_matrix(params: &JacobiParams, k: usize) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (params.alpha(), params.beta());
    let s = a + b;
    let mut diag = vec![0.0; k];
    let mut off = vec![0.0; k];
    diag[0] = (b - a) / (s + 2.0);
    for (i, d) in diag.iter_mut().enumerate().skip(1) {
        let two = 2.0 * i as f64 + s;
        *d = (b - a) * (b + a) / (two * (two + 2.0));
    }
    if k > 1 {
        // i = 1 in cancellation-free form: the (i + a + b) and (2i + a + b - 1)
        // factors cancel exactly there, which matters when a + b -> -1.
        off[0] = (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) * (2.0 + s) * (3.0 + s))).sqrt();
    }
    for i in 2..k {
        let fi = i as f64;
        let two = 2.0 * fi + s;
        let sq =
            4.0 * fi * (fi + a) * (fi + b) * (fi + s) / (two * two * (two + 1.0) * (two - 1.0));
        off[i - 1] = sq.sqrt();
    }
    (diag, off)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, carrying the
/// first components of the eigenvectors in `z`. On return `d` holds ascending
/// eigenvalues; `e` is workspace (subdiagonal on entry, `e[i]` couples
/// `d[i]` and `d[i+1]`, the last slot is scratch).
fn symmetric_tridiagonal_eigen(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    debug_assert_eq!(e.len(), n);
    debug_assert_eq!(z.len(), n);
    e[n - 1] = 0.0;
    const MAX_SWEEPS: usize = 50;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= f64::EPSILON * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps >= MAX_SWEEPS {
                return Err(Error::EigenFailure {
                    index: l,
                    iterations: sweeps,
                });
            }
            sweeps += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let bb = c * e[i];
                if f.abs() >= g.abs() {
                    c = g / f;
                    r = c.hypot(1.0);
                    e[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = s.hypot(1.0);
                    e[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;

                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // ascending eigenvalues, first components permuted alongside
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("eigenvalues are finite"));
    let sorted_d: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let sorted_z: Vec<f64> = order.iter().map(|&i| z[i]).collect();
    d.copy_from_slice(&sorted_d);
    z.copy_from_slice(&sorted_z);
    Ok(())
}

/// Builds the `k`-node Gauss-Jacobi rule for `dmu_{alpha,beta}` on `[-1, 1]`.
pub fn gauss_jacobi_rule(params: &JacobiParams, k: usize) -> Result<QuadratureRule> {
    if k == 0 {
        return Err(Error::OutOfDomain {
            value: 0.0,
            domain: "node count k >= 1",
        });
    }
    let (mut diag, mut off) = recurrence_matrix(params, k);
    let mut z = vec![0.0; k];
    z[0] = 1.0;
    symmetric_tridiagonal_eigen(&mut diag, &mut off, &mut z)?;
    let mu0 = total_measure(params);
    let weights: Vec<f64> = z.iter().map(|&zi| mu0 * zi * zi).collect();
    debug_assert!(diag.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(diag.iter().all(|&x| (-1.0..=1.0).contains(&x)));
    Ok(QuadratureRule {
        nodes: diag,
        weights,
        exact_degree: 2 * k - 1,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance { tol })
    }
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && (-1.0..=1.0).contains(&a) && a <= b && b <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInterval { a, b })
    }
}

fn ladder<E: Fn(usize) -> Result<f64>>(estimate: E, start: usize, tol: f64) -> Result<f64> {
    let mut k = start;
    let mut prev: Option<f64> = None;
    loop {
        let cur = estimate(k)?;
        if let Some(p) = prev {
            if (cur - p).abs() <= tol {
                return Ok(cur);
            }
        }
        if 2 * k > NODE_BUDGET {
            return Err(Error::ToleranceNotReached {
                tol,
                budget: NODE_BUDGET,
                best: cur,
                change: prev.map_or(f64::INFINITY, |p| (cur - p).abs()),
            });
        }
        prev = Some(cur);
        k *= 2;
    }
}

/// Integrates `f` against `dmu_{alpha,beta}` over `[a, b]`, doubling the node
/// count until two successive estimates differ by at most `tol`.
pub fn integrate_measure<F: Fn(f64) -> f64>(
    params: &JacobiParams,
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    check_interval(a, b)?;
    check_tol(tol)?;
    if a == b {
        return Ok(0.0);
    }
    let (alpha, beta) = (params.alpha(), params.beta());

    if a == -1.0 && b == 1.0 {
        return ladder(
            |k| Ok(gauss_jacobi_rule(params, k)?.integrate(&f)),
            FULL_LADDER_START,
            tol,
        );
    }

    if a == -1.0 {
        // left-touching: adapt to the (1+x)^beta factor, fold (1-x)^alpha
        let half = 0.5 * (1.0 + b);
        let scale = half.powf(beta + 1.0);
        let mapped = JacobiParams::new(0.0, beta)?;
        return ladder(
            |k| {
                let rule = gauss_jacobi_rule(&mapped, k)?;
                Ok(scale
                    * rule.integrate(|t| {
                        let x = -1.0 + (1.0 + t) * half;
                        f(x) * (1.0 - x).powf(alpha)
                    }))
            },
            EDGE_LADDER_START,
            tol,
        );
    }

    if b == 1.0 {
        // right-touching: adapt to the (1-x)^alpha factor, fold (1+x)^beta
        let half = 0.5 * (1.0 - a);
        let scale = half.powf(alpha + 1.0);
        let mapped = JacobiParams::new(alpha, 0.0)?;
        return ladder(
            |k| {
                let rule = gauss_jacobi_rule(&mapped, k)?;
                Ok(scale
                    * rule.integrate(|t| {
                        let x = 1.0 - (1.0 - t) * half;
                        f(x) * (1.0 + x).powf(beta)
                    }))
            },
            EDGE_LADDER_START,
            tol,
        );
    }

    // interior: composite Gauss-Legendre panels, full weight folded in
    let legendre = JacobiParams::legendre();
    let base = gauss_jacobi_rule(&legendre, COMPOSITE_ORDER)?;
    let mut panels = 1usize;
    let mut prev: Option<f64> = None;
    loop {
        let width = (b - a) / panels as f64;
        let mut cur = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let mid = lo + 0.5 * width;
            let halfwidth = 0.5 * width;
            cur += halfwidth
                * base.integrate(|t| {
                    let x = mid + t * halfwidth;
                    f(x) * (1.0 - x).powf(alpha) * (1.0 + x).powf(beta)
                });
        }
        if let Some(p) = prev {
            if (cur - p).abs() <= tol {
                return Ok(cur);
            }
        }
        if 2 * panels * COMPOSITE_ORDER > NODE_BUDGET {
            return Err(Error::ToleranceNotReached {
                tol,
                budget: NODE_BUDGET,
                best: cur,
                change: prev.map_or(f64::INFINITY, |p| (cur - p).abs()),
            });
        }
        prev = Some(cur);
        panels *= 2;
    }
}

/// Fourier-Jacobi coefficient `c_n(F) = int F p_n dmu` over the full interval.
pub fn fourier_jacobi_coefficient<F: Fn(f64) -> f64>(
    params: &JacobiParams,
    f: F,
    n: usize,
    tol: f64,
) -> Result<f64> {
    integrate_measure(
        params,
        |x| f(x) * params.orthonormal_unchecked(n, x),
        -1.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const PAIRS: [(f64, f64); 4] = [(-0.5, -0.5), (0.0, 0.0), (0.5, 0.5), (0.0, 1.3)];

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    /// Moments of dmu from the integration-by-parts recursion
    /// m_{j+1} = ((beta - alpha) m_j + j m_{j-1}) / (alpha + beta + 2 + j),
    /// an oracle independent of any quadrature rule.
    fn moments(p: &JacobiParams, count: usize) -> Vec<f64> {
        let (a, b) = (p.alpha(), p.beta());
        let mut m = Vec::with_capacity(count);
        m.push(total_measure(p));
        if count > 1 {
            m.push((b - a) * m[0] / (a + b + 2.0));
        }
        for j in 1..count.saturating_sub(1) {
            let jf = j as f64;
            m.push(((b - a) * m[j] + jf * m[j - 1]) / (a + b + 2.0 + jf));
        }
        m
    }

    #[test]
    fn one_node_legendre_rule() {
        let rule = gauss_jacobi_rule(&JacobiParams::legendre(), 1).unwrap();
        assert!(rule.nodes()[0].abs() < 1e-15);
        assert!((rule.weights()[0] - 2.0).abs() < 1e-14);
        assert_eq!(rule.exact_degree(), 1);
    }

    #[test]
    fn two_node_legendre_rule_integrates_x_squared() {
        let rule = gauss_jacobi_rule(&JacobiParams::legendre(), 2).unwrap();
        assert!((rule.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn total_weight_matches_measure() {
        // 2^(a+b+1) B(a+1, b+1) = pi/2 at a = b = 1/2
        let p = params(0.5, 0.5);
        for k in [1usize, 2, 5, 17, 41] {
            let rule = gauss_jacobi_rule(&p, k).unwrap();
            assert!((rule.total_weight() - PI / 2.0).abs() < 1e-12, "k={k}");
        }
        for &(a, b) in &PAIRS {
            let p = params(a, b);
            let rule = gauss_jacobi_rule(&p, 24).unwrap();
            assert!((rule.total_weight() - total_measure(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn rule_shape_invariants() {
        for &(a, b) in &PAIRS {
            let rule = gauss_jacobi_rule(&params(a, b), 33).unwrap();
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(rule.nodes().iter().all(|&x| x > -1.0 && x < 1.0));
            assert!(rule.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn chebyshev_rules_match_closed_forms() {
        // first kind: nodes cos((2j-1) pi / (2k)), weights pi/k
        let k = 12;
        let rule = gauss_jacobi_rule(&params(-0.5, -0.5), k).unwrap();
        for (j, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
            let expected = ((2.0 * (k - j) as f64 - 1.0) * PI / (2.0 * k as f64)).cos();
            assert!((x - expected).abs() < 1e-13, "node {j}");
            assert!((w - PI / k as f64).abs() < 1e-13, "weight {j}");
        }
        // second kind: nodes cos(j pi / (k+1)), weights pi/(k+1) sin^2(j pi/(k+1))
        let rule = gauss_jacobi_rule(&params(0.5, 0.5), k).unwrap();
        for (j, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
            let angle = (k - j) as f64 * PI / (k as f64 + 1.0);
            assert!((x - angle.cos()).abs() < 1e-13, "node {j}");
            assert!(
                (w - PI / (k as f64 + 1.0) * angle.sin().powi(2)).abs() < 1e-13,
                "weight {j}"
            );
        }
    }

    #[test]
    fn degree_exactness_against_moment_recursion() {
        for &(a, b) in &PAIRS {
            let p = params(a, b);
            for k in [1usize, 2, 3, 5, 8, 13, 21] {
                let rule = gauss_jacobi_rule(&p, k).unwrap();
                let want = moments(&p, 2 * k);
                for (j, &m) in want.iter().enumerate() {
                    let got = rule.integrate(|x| x.powi(j as i32));
                    assert!(
                        (got - m).abs() < 1e-12,
                        "alpha={a} beta={b} k={k} j={j}: {got} vs {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn orthonormality_on_small_grid() {
        for &(a, b) in &PAIRS {
            let p = params(a, b);
            let rule = gauss_jacobi_rule(&p, 21).unwrap();
            for m in 0..=12usize {
                for n in m..=12usize {
                    let got = rule.integrate(|x| {
                        p.orthonormal_unchecked(m, x) * p.orthonormal_unchecked(n, x)
                    });
                    let want = if m == n { 1.0 } else { 0.0 };
                    assert!(
                        (got - want).abs() < 1e-11,
                        "alpha={a} beta={b} ({m},{n}): {got}"
                    );
                }
            }
        }
    }

    #[test]
    fn integrate_measure_examples() {
        let p = JacobiParams::legendre();
        // orthonormality of p_0 over the full interval
        let got = integrate_measure(
            &p,
            |x| p.orthonormal_unchecked(0, x).powi(2),
            -1.0,
            1.0,
            1e-12,
        )
        .unwrap();
        assert!((got - 1.0).abs() < 1e-12);
        // analytic value of int_{-1}^{0} p_0 p_1 dx
        let got = integrate_measure(
            &p,
            |x| p.orthonormal_unchecked(0, x) * p.orthonormal_unchecked(1, x),
            -1.0,
            0.0,
            1e-12,
        )
        .unwrap();
        assert!((got + 3f64.sqrt() / 4.0).abs() < 1e-12, "{got}");
        // degenerate interval
        let got = integrate_measure(&p, |x| x.exp(), 0.3, 0.3, 1e-12).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn integrate_measure_interval_additivity() {
        let p = params(0.5, 1.3);
        let tol = 1e-12;
        let f = |x: f64| (1.3 * x).exp() + x * x;
        for (a, c, b) in [(-1.0, -0.2, 1.0), (-0.7, 0.1, 0.9), (-1.0, 0.99, 1.0)] {
            let left = integrate_measure(&p, f, a, c, tol).unwrap();
            let right = integrate_measure(&p, f, c, b, tol).unwrap();
            let whole = integrate_measure(&p, f, a, b, tol).unwrap();
            assert!(
                (left + right - whole).abs() <= 2.0 * tol,
                "split at {c}: {} vs {whole}",
                left + right
            );
        }
    }

    #[test]
    fn endpoint_touching_intervals_near_one() {
        // b -> 1 geometry of the divergence experiments: no cancellation
        let p = params(0.5, 0.5);
        let b = 1.0 - 1.0 / (64.0 * 64.0);
        let got = integrate_measure(&p, |_| 1.0, -1.0, b, 1e-12).unwrap();
        let full = total_measure(&p);
        let tail = integrate_measure(&p, |_| 1.0, b, 1.0, 1e-12).unwrap();
        assert!((got + tail - full).abs() < 1e-11);
        assert!(tail > 0.0 && tail < 1e-4);
    }

    #[test]
    fn coefficient_recovers_orthonormality() {
        let p = JacobiParams::legendre();
        let f3 = |x: f64| p.orthonormal_unchecked(3, x);
        assert!((fourier_jacobi_coefficient(&p, f3, 3, 1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!(fourier_jacobi_coefficient(&p, f3, 5, 1e-12).unwrap().abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = JacobiParams::legendre();
        assert!(integrate_measure(&p, |x| x, -2.0, 0.0, 1e-12).is_err());
        assert!(integrate_measure(&p, |x| x, 0.5, 0.4, 1e-12).is_err());
        assert!(integrate_measure(&p, |x| x, 0.0, 0.5, -1.0).is_err());
        assert!(gauss_jacobi_rule(&p, 0).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        // a genuinely rough integrand: |x|^(-0.9) is integrable but the
        // composite panels cannot reach 1e-15 within the budget
        let p = JacobiParams::legendre();
        let err = integrate_measure(&p, |x: f64| x.abs().powf(-0.9), -0.5, 0.5, 1e-15);
        match err {
            Err(Error::ToleranceNotReached { best, budget, .. }) => {
                assert!(best.is_finite());
                assert_eq!(budget, NODE_BUDGET);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
