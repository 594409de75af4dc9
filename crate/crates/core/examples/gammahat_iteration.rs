//! Iterating ℳ ↦ −(ℳ + λ)⁻¹ from a random matrix Nevanlinna function.
//!
//! `cargo run --example gammahat_iteration`

use nevanlinna::herglotz::random_nevanlinna;
use nevanlinna::linalg::c64;
use nevanlinna::transforms::iterate_gamma_hat;

fn main() -> nevanlinna::error::Result<()> {
    let f = random_nevanlinna(42, 3, 8)?;
    for lam in [c64(0.0, 2.0), c64(1.0, 1.5), c64(0.2, 0.5)] {
        let trace = iterate_gamma_hat(&f, lam, 40)?;
        println!("λ = {lam}");
        for (k, r) in trace.residuals.iter().enumerate().filter(|(k, _)| k % 5 == 0) {
            println!("  n = {:>2}  ‖ℳ_n − ℳ₀‖ = {r:.3e}", k + 1);
        }
        match trace.contraction_bound() {
            Some(b) => println!("  max ratio {:.4} (bound {b:.4})", trace.max_ratio()),
            None => println!("  max ratio {:.4} (|Im λ| ≤ 1, no a priori bound)", trace.max_ratio()),
        }
    }
    trace_csv()
}

fn trace_csv() -> nevanlinna::error::Result<()> {
    let f = random_nevanlinna(7, 1, 4)?;
    let trace = iterate_gamma_hat(&f, c64(0.0, 2.0), 6)?;
    println!("\nCSV for a scalar start at λ = 2i:");
    trace.write_csv(std::io::stdout()).expect("stdout");
    Ok(())
}
