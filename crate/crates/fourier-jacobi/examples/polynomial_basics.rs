//! Evaluating orthonormal Jacobi polynomials: values, derivatives,
//! normalization constants, eigenvalues, envelope bounds, and the
//! large-degree oscillatory approximation.

use fourier_jacobi::jacobi::JacobiParams;
use std::f64::consts::FRAC_PI_2;

fn main() -> fourier_jacobi::Result<()> {
    let params = JacobiParams::new(0.5, -0.5)?;
    println!(
        "family (alpha, beta) = ({}, {}), standard range: {}",
        params.alpha(),
        params.beta(),
        params.standard_range()
    );

    println!("\n n   p_n(0.3)        p_n'(0.3)       w_n             lambda_n");
    for n in 0..8 {
        println!(
            "{n:2}   {:>13.6e}   {:>13.6e}   {:>13.6e}   {:>10.3}",
            params.orthonormal(n, 0.3)?,
            params.orthonormal_derivative(n, 0.3)?,
            params.normalization(n),
            params.eigenvalue(n)
        );
    }

    // the envelope dominates |p_n| uniformly, up to a constant
    let n = 120;
    let mut worst_ratio = 0.0f64;
    for i in 0..=400 {
        let x = -1.0 + i as f64 / 200.0;
        let ratio = params.orthonormal(n, x)?.abs() / params.envelope_bound(n, x)?;
        worst_ratio = worst_ratio.max(ratio);
    }
    println!("\nenvelope check at n = {n}: sup |p_n| / envelope = {worst_ratio:.4}");

    // two-term oscillatory approximation on (delta/n, pi/2]
    let legendre = JacobiParams::legendre();
    let scale = 2f64.sqrt(); // 2^((alpha+beta+1)/2)
    println!("\noscillatory approximation at alpha = beta = 0:");
    println!(" n     max |approx - exact| over theta in [0.1, pi/2]");
    for n in [64usize, 128, 256, 512] {
        let mut worst = 0.0f64;
        let mut theta = 0.1;
        while theta <= FRAC_PI_2 {
            let approx = legendre.asymptotic_approx(n, theta)?;
            let exact = scale * legendre.orthonormal(n, theta.cos())?;
            worst = worst.max((approx - exact).abs());
            theta += 0.005;
        }
        println!("{n:4}   {worst:.6e}");
    }
    println!("(the error roughly halves per doubling of n)");
    Ok(())
}
