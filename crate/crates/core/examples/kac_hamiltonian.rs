//! Step Hamiltonians from Jacobi coefficients and their shifts.
//!
//! `cargo run --example kac_hamiltonian`

use std::f64::consts::PI;

use nevanlinna::kac::{gammahat_hamiltonian, hamiltonian_h0, hamiltonian_hn, kac_algorithm};

fn show(label: &str, h: &nevanlinna::kac::StepHamiltonian, rows: usize) {
    println!("{label}");
    for j in 0..rows.min(h.intervals()) {
        let b = h.breakpoints();
        println!("  [{:>8.4}, {:>8.4})  θ/π = {:.4}", b[j], b[j + 1], h.thetas()[j] / PI);
    }
}

fn main() -> nevanlinna::error::Result<()> {
    let mut a = vec![0.0; 20];
    let mut b = vec![1.0; 20];
    a[0] = 1.0;
    a[1] = -0.5;
    b[0] = 0.8;
    let h = kac_algorithm(&a, &b, 12)?;
    show("Kac Hamiltonian, a = (1, −0.5, 0, …), b = (0.8, 1, …)", &h, 6);
    show("H₀", &hamiltonian_h0(6)?, 4);
    show("H₃", &hamiltonian_hn(&h, 3)?, 7);
    show("Γ̂-scheme image", &gammahat_hamiltonian(&h)?, 4);
    println!("\nJSON of the first three intervals:\n{}", h.prefix(3)?.to_json());
    Ok(())
}
