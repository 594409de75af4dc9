//! Realizing M⁻¹/(λ² − 1) through the defect space of a contraction.
//!
//! `cargo run --example defect_realization`

use nevanlinna::linalg::{c64, hermitian_eigen, max_abs_diff, op_norm};
use nevanlinna::random;
use nevanlinna::realize::{bold_t, defect_operator, simplicity_check, SubspaceRealization};
use nevanlinna::transforms::gamma;

fn main() -> nevanlinna::error::Result<()> {
    let mut rng = random::rng(2024);
    let t = random::random_hermitian_contraction(&mut rng, 10);
    let q = random::random_isometry(&mut rng, 10, 2);
    let r = SubspaceRealization::new(t, q)?;
    let b = bold_t(&r)?;

    let defect = defect_operator(r.operator())?;
    println!("T: {}×{}, rank D_T = {}", r.space_dim(), r.space_dim(), defect.range_basis.ncols());
    println!("bold T: {}×{}, ‖bold T‖ = {:.15}", b.space_dim(), b.space_dim(), op_norm(b.operator()));
    println!("simple: T {:?}, bold T {:?}", simplicity_check(&r), simplicity_check(&b));

    for lam in [c64(0.0, 0.5), c64(1.5, 0.0), c64(-0.4, -0.2)] {
        let lhs = b.m_function(lam)?;
        let rhs = gamma(&r.m_function(lam)?, lam)?;
        println!("λ = {lam:<12} ‖P(bold T − λ)⁻¹P − M⁻¹/(λ²−1)‖ = {:.2e}", max_abs_diff(&lhs, &rhs));
    }

    let (spec, _) = hermitian_eigen(b.operator());
    println!("spectrum of bold T: {:?}", spec.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    Ok(())
}
