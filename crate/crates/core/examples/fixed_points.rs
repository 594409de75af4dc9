//! The two fixed points and their quadrature representations.
//!
//! `cargo run --example fixed_points`

use nevanlinna::jacobi::{quadrature_m0, ChebyshevKind};
use nevanlinna::linalg::{c64, scaled_identity};
use nevanlinna::specialfn::{m0_gamma, m0_gammahat};
use nevanlinna::transforms::{gamma, gamma_hat};

fn main() -> nevanlinna::error::Result<()> {
    println!("{:>14} {:>30} {:>10} {:>30} {:>10}", "λ", "M₀(λ)", "|Γ − id|", "ℳ₀(λ)", "|Γ̂ − id|");
    for lam in [c64(0.0, 2.0), c64(1.0, 1.0), c64(-0.5, 0.3), c64(3.0, -0.1), c64(1.5, 0.0)] {
        let m = m0_gamma(lam)?;
        let gm = gamma(&scaled_identity(1, m), lam)?[(0, 0)];
        let (hat_line, hat_err) = match m0_gammahat(lam) {
            Ok(mh) => {
                let g = gamma_hat(&scaled_identity(1, mh), lam)?[(0, 0)];
                (format!("{mh:.6}"), format!("{:.1e}", (g - mh).norm()))
            }
            Err(e) => (format!("({e})"), String::new()),
        };
        println!("{:>14} {:>30} {:>10.1e} {:>30} {:>10}", format!("{lam}"), format!("{m:.6}"), (gm - m).norm(), hat_line, hat_err);
    }

    let lam = c64(0.3, 0.8);
    println!("\nquadrature at λ = {lam}");
    for nodes in [10, 100, 1000, 10_000] {
        let e1 = (quadrature_m0(lam, nodes, ChebyshevKind::First)? - m0_gamma(lam)?).norm();
        let e2 = (quadrature_m0(lam, nodes, ChebyshevKind::Second)? - m0_gammahat(lam)?).norm();
        println!("  {nodes:>6} nodes: first kind {e1:.2e}, second kind {e2:.2e}");
    }
    Ok(())
}
