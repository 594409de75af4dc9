//! m-functions of truncated J₀ and Ĵ₀ converge to the closed forms.
//!
//! `cargo run --example jacobi_mfunction`

use nevanlinna::jacobi::{build_j0, build_jhat0, m_cf, m_resolvent, BlockJacobi};
use nevanlinna::linalg::{c64, max_abs_diff};
use nevanlinna::specialfn::{m0_gamma, m0_gammahat};

fn main() -> nevanlinna::error::Result<()> {
    let lam = c64(0.5, 0.6);
    let (m0, mh0) = (m0_gamma(lam)?, m0_gammahat(lam)?);
    println!("λ = {lam}");
    println!("{:>6} {:>14} {:>14} {:>14}", "N", "|J₀ − M₀|", "|Ĵ₀ − ℳ₀|", "|elim − cf|");
    for n in [2, 5, 10, 20, 50, 100, 200] {
        let j0 = build_j0(1, n)?;
        let jh = build_jhat0(1, n)?;
        let e0 = (m_resolvent(&j0, lam)?[(0, 0)] - m0).norm();
        let eh = (m_resolvent(&jh, lam)?[(0, 0)] - mh0).norm();
        let agree = max_abs_diff(&m_resolvent(&jh, lam)?, &m_cf(&jh, lam)?);
        println!("{n:>6} {e0:>14.3e} {eh:>14.3e} {agree:>14.1e}");
    }

    // a 3×3 block Jacobi matrix read back from its JSON form
    let j = build_jhat0(3, 40)?;
    let back = BlockJacobi::from_json(&j.to_json()).expect("round trip");
    let m = m_resolvent(&back, lam)?;
    println!("\nblock case d = 3, N = 40: diagonal {:.6}, off-diagonal max {:.1e}", m[(0, 0)], m[(0, 1)].norm().max(m[(1, 2)].norm()));
    Ok(())
}
