//! Empirical operator quotients ||T f||_p / ||f||_p over a grid of windows
//! and inputs: stable for p = 2, weak-norm probes at p = 1.

use fourier_jacobi::experiments::run_boundedness_scan;
use fourier_jacobi::multiplier::DiagonalCache;
use fourier_jacobi::{FiniteSequence, JacobiParams};

fn main() -> fourier_jacobi::Result<()> {
    let params = JacobiParams::legendre();
    let cache = DiagonalCache::new();
    let n_trunc = 192;

    let intervals: Vec<(f64, f64)> = [-0.9, -0.5, 0.0, 0.5, 0.9, 0.99]
        .iter()
        .map(|&b| (-1.0, b))
        .chain([(-0.5, 0.5), (-0.25, 0.75), (-1.0, 1.0)])
        .collect();
    let family: Vec<FiniteSequence> = [0usize, 1, 2, 4, 8, 16, 32]
        .iter()
        .map(|&k| FiniteSequence::delta(k, n_trunc))
        .collect();

    for p in [2.0, 1.5] {
        let report = run_boundedness_scan(&params, p, &intervals, &family, n_trunc, &cache)?;
        let max = report
            .meta
            .iter()
            .find(|(k, _)| k == "max_quotient")
            .map(|(_, v)| v.clone())
            .unwrap();
        println!(
            "p = {p}: {} quotients over {} intervals x {} inputs, max = {}",
            report.rows.len(),
            intervals.len(),
            family.len(),
            &max[..8]
        );
    }

    // weak-type probe at p = 1
    let report = run_boundedness_scan(&params, 1.0, &intervals, &family, n_trunc, &cache)?;
    let max = report
        .meta
        .iter()
        .find(|(k, _)| k == "max_quotient")
        .map(|(_, v)| v.clone())
        .unwrap();
    println!("p = 1 (weak-l1 numerator): max quotient = {}", &max[..8]);

    // contrast: the strong-l1 quotient along the divergence family keeps
    // growing, which is exactly the l1 failure
    println!("\nstrong l1 quotients along delta_m, window [0, 1 - 1/m^2]:");
    for m in [16usize, 64, 256] {
        let b = 1.0 - 1.0 / (m as f64 * m as f64);
        let f = FiniteSequence::delta(m, m + 1);
        let spec = fourier_jacobi::MultiplierSpec::new(params, 0.0, b, m + 1, 4 * m)?;
        let out = fourier_jacobi::multiplier::apply_direct(&spec, &f, &cache)?;
        let l1: f64 = out.values().iter().map(|v| v.abs()).sum();
        println!("  m = {m:4}: ||T delta_m||_1 = {l1:.3}");
    }
    Ok(())
}
