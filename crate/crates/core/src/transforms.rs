//! The pointwise maps `Γ: M ↦ M⁻¹/(λ² − 1)` and `Γ̂: ℳ ↦ −(ℳ + λ)⁻¹`, and
//! the Γ̂ iteration with its convergence record.
//!
//! Everything here acts on values at a fixed spectral parameter, not on
//! function objects.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::herglotz::RealizedFunction;
use crate::linalg::{self, condition_number, op_norm, scaled_identity, CMatrix};
use crate::specialfn::m0_gammahat;

/// Condition numbers above this are flagged by [`gamma_checked`].
pub const ILL_CONDITIONED: f64 = 1e12;

/// Residuals below this are treated as the double-precision floor by
/// [`IterationTrace::max_ratio`].
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// `M⁻¹/(λ² − 1)`.
pub fn gamma(m: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    let scale = lambda * lambda - 1.0;
    if scale.norm() <= 1e-14 {
        return Err(Error::OnCut { lambda, half_width: 1.0 });
    }
    let inv = linalg::inverse(m).map_err(|e| Error::Singular(format!("Γ argument: {e}")))?;
    Ok(inv / scale)
}

/// [`gamma`] together with a flag raised when `cond(M) > 1e12`.
pub fn gamma_checked(m: &CMatrix, lambda: Complex64) -> Result<(CMatrix, bool)> {
    let ill = condition_number(m) > ILL_CONDITIONED;
    Ok((gamma(m, lambda)?, ill))
}

/// `−(ℳ + λI)⁻¹`. A singular shift means the argument was not a Nevanlinna
/// value at `λ`.
pub fn gamma_hat(m: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    let shifted = m + scaled_identity(m.nrows(), lambda);
    let inv = linalg::inverse(&shifted)
        .map_err(|e| Error::Singular(format!("ℳ + λI at λ = {lambda}: {e}")))?;
    Ok(-inv)
}

/// Per-step record of `ℳ_{k+1} = Γ̂(ℳ_k)` at a fixed `λ`.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub lambda: Complex64,
    /// `ℳ₁, ℳ₂, …, ℳ_n`.
    pub values: Vec<CMatrix>,
    /// `‖ℳ_k − ℳ₀(λ)I‖` in operator norm, one per value.
    pub residuals: Vec<f64>,
    /// `residual_{k+1}/residual_k`; `NaN` where the previous residual is zero.
    pub ratios: Vec<f64>,
}

impl IterationTrace {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::NAN)
    }

    /// Largest contraction ratio among steps whose starting residual is above
    /// [`RESIDUAL_FLOOR`].
    pub fn max_ratio(&self) -> f64 {
        self.ratios
            .iter()
            .zip(&self.residuals)
            .filter(|(_, &r)| r > RESIDUAL_FLOOR)
            .map(|(&q, _)| q)
            .fold(0.0, f64::max)
    }

    /// Geometric rate `1/|Im λ|²`; meaningful only when `|Im λ| > 1`.
    pub fn contraction_bound(&self) -> Option<f64> {
        let y = self.lambda.im.abs();
        (y > 1.0).then(|| 1.0 / (y * y))
    }

    /// CSV with columns `n, re_value00, im_value00, residual, ratio`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,re_value00,im_value00,residual,ratio")?;
        for (k, (v, r)) in self.values.iter().zip(&self.residuals).enumerate() {
            let ratio = if k == 0 { String::new() } else { crate::json::fmt_num(self.ratios[k - 1]) };
            writeln!(
                out,
                "{},{},{},{},{}",
                k + 1,
                crate::json::fmt_num(v[(0, 0)].re),
                crate::json::fmt_num(v[(0, 0)].im),
                crate::json::fmt_num(*r),
                ratio
            )?;
        }
        Ok(())
    }
}

/// Iterates Γ̂ `steps` times from a starting value.
pub fn iterate_gamma_hat_from(start: &CMatrix, lambda: Complex64, steps: usize) -> Result<IterationTrace> {
    if steps == 0 {
        return Err(Error::Invalid("at least one iteration step is required".into()));
    }
    if lambda.im == 0.0 {
        return Err(Error::Invalid(format!("Γ̂ iteration needs Im λ ≠ 0, got {lambda}")));
    }
    let d = start.nrows();
    let fixed = scaled_identity(d, m0_gammahat(lambda)?);
    let mut values = Vec::with_capacity(steps);
    let mut residuals = Vec::with_capacity(steps);
    let mut current = start.clone();
    for _ in 0..steps {
        current = gamma_hat(&current, lambda)?;
        residuals.push(op_norm(&(&current - &fixed)));
        values.push(current.clone());
    }
    let ratios = residuals
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::NAN })
        .collect();
    Ok(IterationTrace { lambda, values, residuals, ratios })
}

/// `ℳ₁ = Γ̂(F(λ))`, `ℳ_{k+1} = Γ̂(ℳ_k)`, measured against `ℳ₀(λ)I`.
pub fn iterate_gamma_hat(f: &RealizedFunction, lambda: Complex64, steps: usize) -> Result<IterationTrace> {
    iterate_gamma_hat_from(&f.evaluate(lambda)?, lambda, steps)
}

/// Applies Γ̂ `power` times to `ℳ₀(λ)I_d` and returns the operator-norm
/// deviation from the start.
pub fn fixed_point_residual_all_powers(lambda: Complex64, power: usize, d: usize) -> Result<f64> {
    if power == 0 || d == 0 {
        return Err(Error::Invalid("power and dimension must be at least 1".into()));
    }
    let start = scaled_identity(d, m0_gammahat(lambda)?);
    let mut m = start.clone();
    for _ in 0..power {
        m = gamma_hat(&m, lambda)?;
    }
    Ok(op_norm(&(m - start)))
}
