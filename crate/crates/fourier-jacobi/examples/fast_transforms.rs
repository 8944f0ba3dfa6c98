//! The discrete Hilbert and Hankel-type transforms: naive O(N^2) sums vs the
//! FFT route, with agreement checks and timings.

use fourier_jacobi::seq_ops::{
    adjoint_hardy, hardy, hilbert_transform, q_transform, EvalMode, FiniteSequence,
};
use std::time::Instant;

fn deterministic_input(len: usize) -> FiniteSequence {
    FiniteSequence::new((0..len).map(|n| ((n * n + 1) as f64).sin()).collect()).expect("finite")
}

fn main() -> fourier_jacobi::Result<()> {
    // the transforms on a delta have simple closed forms
    let delta = FiniteSequence::delta(0, 8);
    println!(
        "H delta_0  = {:?}",
        hilbert_transform(&delta, EvalMode::Fast).values()
    );
    println!(
        "Q_1 delta_0 = {:?}",
        q_transform(&delta, 1.0, EvalMode::Fast)?.values()
    );
    println!("O_1 delta_0 = {:?}", hardy(&delta, true).values());
    println!("O_2 delta_0 = {:?}", adjoint_hardy(&delta, true).values());

    // agreement between the two routes
    let f = deterministic_input(4096);
    let h_naive = hilbert_transform(&f, EvalMode::Naive);
    let h_fast = hilbert_transform(&f, EvalMode::Fast);
    let worst = h_naive
        .values()
        .iter()
        .zip(h_fast.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("\nN = 4096: max |H_fast - H_naive| = {worst:.3e}");

    // timing crossover
    println!("\n   N      naive        fast      speedup");
    for exp in [10u32, 12, 14] {
        let n = 1usize << exp;
        let f = deterministic_input(n);
        let t0 = Instant::now();
        std::hint::black_box(hilbert_transform(&f, EvalMode::Naive));
        let naive = t0.elapsed().as_secs_f64();
        let t0 = Instant::now();
        std::hint::black_box(hilbert_transform(&f, EvalMode::Fast));
        let fast = t0.elapsed().as_secs_f64();
        println!(
            "{n:>6}   {naive:>9.2e}   {fast:>9.2e}   {:>7.1}x",
            naive / fast
        );
    }

    // doubling the length costs about 2x on the fast path
    let mut previous = None;
    println!("\nfast-path scaling:");
    for exp in [16u32, 17, 18] {
        let n = 1usize << exp;
        let f = deterministic_input(n);
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let t0 = Instant::now();
            std::hint::black_box(hilbert_transform(&f, EvalMode::Fast));
            best = best.min(t0.elapsed().as_secs_f64());
        }
        match previous {
            Some(last) => println!("  N = 2^{exp}: {best:.2e} s  (x{:.2})", best / last),
            None => println!("  N = 2^{exp}: {best:.2e} s"),
        }
        previous = Some(best);
    }
    Ok(())
}
