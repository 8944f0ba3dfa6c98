use std::process::ExitCode;

fn main() -> ExitCode {
    fourier_jacobi::cli::run()
}
