//! Weyl disks of a canonical system shrink onto the Jacobi m-function.
//!
//! `cargo run --example weyl_disk`

use nevanlinna::canonical::{m_canonical, weyl_disks_at};
use nevanlinna::jacobi::{m_resolvent, BlockJacobi};
use nevanlinna::kac::{hamiltonian_hn, kac_algorithm};
use nevanlinna::linalg::c64;
use nevanlinna::specialfn::m0_gammahat;

fn main() -> nevanlinna::error::Result<()> {
    let mut a = vec![0.0; 300];
    let mut b = vec![1.0; 300];
    a[..3].copy_from_slice(&[0.5, -0.3, 0.2]);
    b[..2].copy_from_slice(&[1.2, 0.9]);
    let h = kac_algorithm(&a, &b, 250)?;
    let lam = c64(0.3, 0.9);
    let jac = m_resolvent(&BlockJacobi::scalar(&a, &b[..299])?, lam)?[(0, 0)];

    println!("λ = {lam}, Jacobi m-function {jac:.10}");
    for d in weyl_disks_at(&h, lam, &[1, 2, 4, 8, 16, 32, 64, 128])? {
        println!(
            "  T = {:>9.3}  center {:>30}  radius {:.2e}  |center − m| = {:.2e}",
            d.truncation_t,
            format!("{:.10}", d.center),
            d.radius,
            (d.center - jac).norm()
        );
    }
    let e = m_canonical(&h, lam, 1e-10)?;
    println!("m_canonical: {} (converged: {})", e.to_json(), e.converged);

    println!("\nshifted Hamiltonians at 2i approach ℳ₀(2i) = {:.10}", m0_gammahat(c64(0.0, 2.0))?);
    for n in [1, 2, 4, 8, 12] {
        let e = m_canonical(&hamiltonian_hn(&h, n)?, c64(0.0, 2.0), 1e-10)?;
        println!("  n = {n:>2}: {:.10}", e.m_value());
    }
    Ok(())
}
