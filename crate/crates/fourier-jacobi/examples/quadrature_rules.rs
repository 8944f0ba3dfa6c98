//! Gauss-Jacobi rules and integration against the measure
//! `(1-x)^alpha (1+x)^beta dx`, including endpoint-touching subintervals.

use fourier_jacobi::quadrature::{
    fourier_jacobi_coefficient, gauss_jacobi_rule, integrate_measure, total_measure, DEFAULT_TOL,
};
use fourier_jacobi::JacobiParams;

fn main() -> fourier_jacobi::Result<()> {
    let params = JacobiParams::new(0.5, 0.5)?;
    let rule = gauss_jacobi_rule(&params, 6)?;
    println!("6-node rule for (alpha, beta) = (0.5, 0.5):");
    println!("  node            weight");
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  {x:>13.10}   {w:.10}");
    }
    println!(
        "  total weight {:.12} vs closed-form measure {:.12}",
        rule.total_weight(),
        total_measure(&params)
    );
    println!("  exact through degree {}", rule.exact_degree());

    // an 8-node rule integrates x^10 only approximately; 16 nodes are exact
    let legendre = JacobiParams::legendre();
    for k in [4usize, 8, 16] {
        let rule = gauss_jacobi_rule(&legendre, k)?;
        println!(
            "int x^10 dx over [-1,1] with {k:2} nodes: {:.12} (exact 2/11 = {:.12})",
            rule.integrate(|x| x.powi(10)),
            2.0 / 11.0
        );
    }

    // subinterval integration adapts to the geometry
    let f = |x: f64| (2.0 * x).exp();
    println!("\nint exp(2x) dmu over subintervals, (alpha, beta) = (0.5, 0.5):");
    for (a, b) in [(-1.0, 1.0), (-1.0, 0.0), (0.3, 0.9), (0.5, 1.0)] {
        let value = integrate_measure(&params, f, a, b, DEFAULT_TOL)?;
        println!("  [{a:>4}, {b:>4}] -> {value:.12}");
    }
    // additivity across a split point
    let whole = integrate_measure(&params, f, -1.0, 0.9, DEFAULT_TOL)?;
    let left = integrate_measure(&params, f, -1.0, 0.3, DEFAULT_TOL)?;
    let right = integrate_measure(&params, f, 0.3, 0.9, DEFAULT_TOL)?;
    println!("  additivity defect: {:.3e}", (left + right - whole).abs());

    // coefficients against the orthonormal family pick out basis elements
    println!("\ncoefficients of F = p_3 at alpha = beta = 0:");
    let p3 = move |x: f64| legendre.orthonormal(3, x).unwrap();
    for n in 0..6 {
        let c = fourier_jacobi_coefficient(&legendre, p3, n, DEFAULT_TOL)?;
        println!("  c_{n} = {c:>13.6e}");
    }
    Ok(())
}
