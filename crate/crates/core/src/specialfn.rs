//! Branch-correct square roots and the closed-form fixed points of the two
//! transformations.
//!
//! `sqrt_offcut(λ, c)` is the branch of `√(λ² − c²)` that is holomorphic on
//! `ℂ ∖ [−c, c]` and behaves like `λ` at infinity. It is realized as the
//! product of two principal roots `√(λ − c)·√(λ + c)`: each factor has its cut
//! on a half-line, and the two cuts cancel outside `[−c, c]`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points closer than this to a cut are rejected, never perturbed.
pub const CUT_TOL: f64 = 1e-12;

fn distance_to_segment(lambda: Complex64, c: f64) -> f64 {
    let dx = (lambda.re.abs() - c).max(0.0);
    dx.hypot(lambda.im)
}

/// Fails when `λ` is non-finite or within `CUT_TOL` of `[−c, c]`.
pub fn check_off_cut(lambda: Complex64, c: f64) -> Result<()> {
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::Invalid(format!("non-finite spectral parameter {lambda}")));
    }
    if distance_to_segment(lambda, c) <= CUT_TOL {
        return Err(Error::OnCut { lambda, half_width: c });
    }
    Ok(())
}

/// `√(λ² − c²)` on `ℂ ∖ [−c, c]`, asymptotic to `λ`.
pub fn sqrt_offcut(lambda: Complex64, c: f64) -> Result<Complex64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Invalid(format!("cut half-width must be positive, got {c}")));
    }
    check_off_cut(lambda, c)?;
    Ok((lambda - c).sqrt() * (lambda + c).sqrt())
}

/// Fixed point of `M ↦ M⁻¹/(λ² − 1)`: `−1/√(λ² − 1)`.
pub fn m0_gamma(lambda: Complex64) -> Result<Complex64> {
    Ok(-sqrt_offcut(lambda, 1.0)?.inv())
}

/// Fixed point of `ℳ ↦ −(ℳ + λ)⁻¹`: `(−λ + √(λ² − 4))/2`.
///
/// Evaluated as `−2/(λ + √(λ² − 4))`, the same number written without the
/// cancellation the textbook form suffers for large `|λ|`.
pub fn m0_gammahat(lambda: Complex64) -> Result<Complex64> {
    let root = sqrt_offcut(lambda, 2.0)?;
    Ok(-2.0 / (lambda + root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_examples() {
        let s = sqrt_offcut(c(0.0, 2.0), 1.0).unwrap();
        assert!((s - c(0.0, 5f64.sqrt())).norm() < 1e-14);
        let s = sqrt_offcut(c(0.0, 2.0), 2.0).unwrap();
        assert!((s - c(0.0, 2.0 * 2f64.sqrt())).norm() < 1e-14);
        let s = sqrt_offcut(c(3.0, 0.0), 1.0).unwrap();
        assert!((s - c(8f64.sqrt(), 0.0)).norm() < 1e-14);
        // left of the cut the branch follows λ, so the value is negative
        let s = sqrt_offcut(c(-3.0, 0.0), 1.0).unwrap();
        assert!((s - c(-(8f64.sqrt()), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cut_points_rejected() {
        assert!(matches!(sqrt_offcut(c(0.3, 0.0), 1.0), Err(Error::OnCut { .. })));
        assert!(matches!(sqrt_offcut(c(1.0, 1e-13), 1.0), Err(Error::OnCut { .. })));
        assert!(m0_gammahat(c(-2.0, 0.0)).is_err());
        assert!(sqrt_offcut(c(1.0 + 1e-9, 0.0), 1.0).is_ok());
        assert!(sqrt_offcut(c(0.0, 1.0), 0.0).is_err());
        assert!(sqrt_offcut(c(f64::NAN, 1.0), 1.0).is_err());
    }

    #[test]
    fn m0_gamma_examples() {
        let v = m0_gamma(c(0.0, 2.0)).unwrap();
        assert!((v - c(0.0, 1.0 / 5f64.sqrt())).norm() < 1e-14);
        let v = m0_gamma(c(3.0, 0.0)).unwrap();
        assert!((v.re + 1.0 / 8f64.sqrt()).abs() < 1e-14 && v.im.abs() < 1e-15);
        let y = 1e6;
        let lam = c(0.0, y);
        assert!((lam * m0_gamma(lam).unwrap() + 1.0).norm() < 1e-10);
    }

    #[test]
    fn m0_gammahat_examples() {
        let v = m0_gammahat(c(0.0, 2.0)).unwrap();
        assert!((v - c(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-15);
        let v = m0_gammahat(c(1.0, 1.0)).unwrap();
        assert!((v - c(-0.2571, 0.5291)).norm() < 1e-4);
        let lam = c(0.3, -0.7);
        let m = m0_gammahat(lam).unwrap();
        assert!((m + (m + lam).inv()).norm() < 1e-14);
        let lam = c(0.0, 1e8);
        assert!((lam * m0_gammahat(lam).unwrap() + 1.0).norm() < 1e-12);
    }

    fn off_axis() -> impl Strategy<Value = Complex64> {
        (-6.0f64..6.0, 0.01f64..6.0, any::<bool>())
            .prop_map(|(re, im, lower)| c(re, if lower { -im } else { im }))
    }

    proptest! {
        #[test]
        fn branch_squares_back(lam in off_axis(), cw in 0.5f64..3.0) {
            let s = sqrt_offcut(lam, cw).unwrap();
            let target = lam * lam - cw * cw;
            prop_assert!((s * s - target).norm() <= 1e-13 * (lam.norm_sqr() + cw * cw));
            if lam.im > 0.0 {
                prop_assert!(s.im > 0.0);
            }
        }

        #[test]
        fn conjugate_symmetry(lam in off_axis()) {
            let l = lam.conj();
            prop_assert!((sqrt_offcut(l, 1.0).unwrap() - sqrt_offcut(lam, 1.0).unwrap().conj()).norm() < 1e-14);
            prop_assert!((m0_gamma(l).unwrap() - m0_gamma(lam).unwrap().conj()).norm() < 1e-14);
            prop_assert!((m0_gammahat(l).unwrap() - m0_gammahat(lam).unwrap().conj()).norm() < 1e-14);
        }

        #[test]
        fn herglotz_sign(lam in off_axis()) {
            prop_assert!(m0_gamma(lam).unwrap().im * lam.im > 0.0);
            prop_assert!(m0_gammahat(lam).unwrap().im * lam.im > 0.0);
        }

        #[test]
        fn fixed_point_identities(lam in off_axis()) {
            let m = m0_gamma(lam).unwrap();
            prop_assert!((m * m * (lam * lam - 1.0) - 1.0).norm() < 1e-12);
            let h = m0_gammahat(lam).unwrap();
            prop_assert!((h * h + lam * h + 1.0).norm() < 1e-12);
        }
    }
}
