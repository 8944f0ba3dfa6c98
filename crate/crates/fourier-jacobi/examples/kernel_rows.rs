//! The closed-form projection kernel: rows, decay, edge weights, and CSV
//! output.

use fourier_jacobi::kernel;
use fourier_jacobi::quadrature::DEFAULT_TOL;
use fourier_jacobi::JacobiParams;

fn main() -> fourier_jacobi::Result<()> {
    let params = JacobiParams::legendre();

    // a single entry two ways: closed form vs direct quadrature
    let closed = kernel::halfline(&params, 0.0, 0, 1, DEFAULT_TOL)?;
    println!(
        "K_0(0, 1) closed form = {closed:.15} (analytic -sqrt(3)/4 = {:.15})",
        -3f64.sqrt() / 4.0
    );

    // a kernel row with its truncation metadata, as CSV
    let slice = kernel::interval_row(&params, -0.5, 0.5, 3, 12, DEFAULT_TOL)?;
    let mut csv = Vec::new();
    slice.write_csv(&mut csv).expect("in-memory write");
    println!("\nrow m = 3 of K on [-0.5, 0.5], truncated at 12:");
    print!("{}", String::from_utf8(csv).expect("UTF-8"));
    println!(
        "observed decay constant sup |K(m,n)| |m-n| = {:.4}",
        slice.empirical_decay_constant()
    );

    // the 1/|m-n| decay visible along one long row
    let b = 0.9;
    let trunc = 2000;
    let slice = kernel::halfline_row(&params, b, 1000, trunc, DEFAULT_TOL)?;
    println!("\n|K_0.9(1000, n)| samples (decay away from the diagonal):");
    for n in [1001usize, 1010, 1100, 1500, 1999] {
        println!(
            "  n = {n:4}: |K| = {:.3e},  |K| * |m-n| = {:.3}",
            slice.values()[n].abs(),
            slice.values()[n].abs() * (n as f64 - 1000.0)
        );
    }

    // diagonal entries are partial squares: between 0 and 1, monotone in b
    println!("\ndiagonal K_b(5, 5) as the window closes:");
    for b in [-0.9, -0.5, 0.0, 0.5, 0.9, 0.999] {
        println!(
            "  b = {b:>6}: {:.12}",
            kernel::halfline_diagonal(&params, b, 5, DEFAULT_TOL)?
        );
    }

    // the bounded edge weights driving the fast decomposition
    let asym = JacobiParams::new(0.0, 1.3)?;
    let mut sup_value = 0.0f64;
    let mut sup_deriv = 0.0f64;
    for i in 0..50 {
        let b = -0.998 + 1.996 * i as f64 / 49.0;
        for v in kernel::value_edge_weight_family(&asym, b, 400)? {
            sup_value = sup_value.max(v.abs());
        }
        for v in kernel::derivative_edge_weight_family(&asym, b, 400)? {
            sup_deriv = sup_deriv.max(v.abs());
        }
    }
    println!("\nedge-weight suprema over n < 400, b grid, (alpha, beta) = (0, 1.3):");
    println!("  sup |r_b(n)| = {sup_value:.4},  sup |R_b(n)| = {sup_deriv:.4}");
    Ok(())
}
