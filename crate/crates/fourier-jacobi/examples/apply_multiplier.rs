//! Applying the interval multiplier: direct kernel summation vs the fast
//! five-term decomposition, and the behaviour as the window fills [-1, 1].

use fourier_jacobi::multiplier::{apply_direct, apply_fast, DiagonalCache, MultiplierSpec};
use fourier_jacobi::{FiniteSequence, JacobiParams};
use std::time::Instant;

fn main() -> fourier_jacobi::Result<()> {
    let params = JacobiParams::new(0.5, 0.5)?;
    let cache = DiagonalCache::new();

    // a small smooth input supported on [0, 32)
    let input = FiniteSequence::new(
        (0..32)
            .map(|n| (0.2 * n as f64).sin() / (n as f64 + 1.0))
            .collect(),
    )?;

    let spec = MultiplierSpec::new(params, -1.0, 0.4, input.len(), 256)?;
    let t0 = Instant::now();
    let direct = apply_direct(&spec, &input, &cache)?;
    let t_direct = t0.elapsed();
    let t0 = Instant::now();
    let fast = apply_fast(&spec, &input, &cache)?;
    let t_fast = t0.elapsed();

    let worst = direct
        .values()
        .iter()
        .zip(fast.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    println!("half-line window [-1, 0.4], n_out = 256:");
    println!("  max |direct - fast| = {worst:.3e}");
    println!("  direct {t_direct:?} (diagonals now cached), fast {t_fast:?}");

    println!("\noutput head (direct):");
    for n in 0..8 {
        println!(
            "  out[{n}] = {:>13.6e}   (input {:>13.6e})",
            direct.values()[n],
            input.get(n)
        );
    }

    // as b -> 1 the half-line multiplier approaches the identity
    println!("\nidentity limit: max |T f - f| on the input window");
    for b in [0.9, 0.99, 0.9999, 1.0 - 1e-6] {
        let spec = MultiplierSpec::new(params, -1.0, b, input.len(), input.len())?;
        let out = apply_fast(&spec, &input, &cache)?;
        let dev = out
            .values()
            .iter()
            .zip(input.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        println!("  b = {b:<12}: {dev:.3e}");
    }

    // complementary windows reassemble the input exactly
    let left = MultiplierSpec::new(params, -1.0, 0.2, input.len(), 64)?;
    let right = MultiplierSpec::new(params, 0.2, 1.0, input.len(), 64)?;
    let lo = apply_direct(&left, &input, &cache)?;
    let hi = apply_direct(&right, &input, &cache)?;
    let defect = lo
        .values()
        .iter()
        .zip(hi.values())
        .enumerate()
        .map(|(n, (a, b))| (a + b - input.get(n)).abs())
        .fold(0.0f64, f64::max);
    println!("\ncomplementarity: max |T_[-1,c] f + T_[c,1] f - f| = {defect:.3e}");
    Ok(())
}
