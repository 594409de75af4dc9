//! The operators Â_n: a Ĵ₀ block chain attached to a realization of the start.
//!
//! `cargo run --example chain_realization`

use nevanlinna::herglotz::RealizedFunction;
use nevanlinna::linalg::{c64, max_abs_diff};
use nevanlinna::random;
use nevanlinna::realize::chain_a;
use nevanlinna::specialfn::m0_gammahat;
use nevanlinna::transforms::iterate_gamma_hat;

fn main() -> nevanlinna::error::Result<()> {
    let mut rng = random::rng(5);
    let k = random::random_with_norm(&mut rng, 3, 1, 0.8);
    let t_hat = random::random_hermitian(&mut rng, 3, -1.0, 1.0);
    let start = RealizedFunction::realization(t_hat.clone(), k.clone())?;
    let lam = c64(0.4, 1.1);
    let fixed = m0_gammahat(lam)?;
    let trace = iterate_gamma_hat(&start, lam, 12)?;

    println!("λ = {lam}, ℳ₀(λ) = {fixed:.8}");
    println!("{:>3} {:>6} {:>28} {:>12} {:>12}", "n", "dim", "P(Â_n − λ)⁻¹P", "vs Γ̂ⁿ", "vs ℳ₀");
    for n in 1..=12 {
        let c = chain_a(&k, &t_hat, n)?;
        let m = c.compressed_resolvent(lam)?;
        println!(
            "{n:>3} {:>6} {:>28} {:>12.1e} {:>12.2e}",
            c.assembled.nrows(),
            format!("{:.8}", m[(0, 0)]),
            max_abs_diff(&m, &trace.values[n - 1]),
            (m[(0, 0)] - fixed).norm()
        );
    }
    Ok(())
}
