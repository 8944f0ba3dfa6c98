//! Discrete Muckenhoupt constants of weight sequences, computed as exact
//! suprema over all index windows.

use fourier_jacobi::seq_ops::{ap_constant, WeightSeq};

fn main() -> fourier_jacobi::Result<()> {
    // the unit weight has constant exactly 1 for every exponent
    for p in [1.0, 1.5, 2.0, 4.0] {
        let w = WeightSeq::ones(512);
        println!("[1]_{{A_{p}}} over N = 512: {}", ap_constant(&w, p, 512)?);
    }

    // power weights (n+1)^gamma: admissible for -1 < gamma < p - 1
    println!("\npower weights at p = 2 (admissible range -1 < gamma < 1):");
    println!(" gamma    N=250      N=500      N=1000");
    for gamma in [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0] {
        let w = WeightSeq::power(gamma, 1000)?;
        print!("{gamma:>6} ");
        for n in [250usize, 500, 1000] {
            print!("  {:>9.4}", ap_constant(&w, 2.0, n)?);
        }
        println!(
            "{}",
            if gamma >= 1.0 {
                "   <- endpoint: keeps growing"
            } else {
                ""
            }
        );
    }
    println!("\ninside the range the constants stabilize; at gamma = p - 1 the");
    println!("window [0, N-1] quotient grows like (log N)/2 without bound.");

    // p = 1 uses the window minimum instead of the dual average
    let w = WeightSeq::power(0.3, 512)?;
    println!(
        "\n[w]_{{A_1}} for w = (n+1)^0.3, N = 512: {:.4}",
        ap_constant(&w, 1.0, 512)?
    );

    // scale invariance: the quotient ignores multiplicative constants
    let w = WeightSeq::power(0.5, 256)?;
    let scaled = WeightSeq::custom(w.values().iter().map(|v| 17.0 * v).collect())?;
    println!(
        "\nscale invariance: {:.12} vs {:.12}",
        ap_constant(&w, 2.0, 256)?,
        ap_constant(&scaled, 2.0, 256)?
    );
    Ok(())
}
