//! Canonical systems `J x′ = z H x` with step Hamiltonians, solved with exact
//! transfer matrices, and Weyl-disk estimates of their m-function.
//!
//! Orientation: `m_H(λ) = −x₂(0)/x₁(0)` for the solution of the system at
//! `z = −λ` that is square integrable against `H`. With this choice the
//! m-function of the Hamiltonian produced by the Kac algorithm from a Jacobi
//! matrix `J` is `((J − λ)⁻¹e₀, e₀)`, and `m_{H₀}` is the Herglotz function
//! `(−λ + √(λ² − 4))/2`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kac::StepHamiltonian;
use crate::linalg::c64;

pub type Matrix2c = Matrix2<Complex64>;

/// Allowed gap between the computed and tracked determinant of a
/// renormalized propagator.
pub const DET_DRIFT_TOL: f64 = 1e-9;

/// `I + z·l·(−J)·e_θe_θᵀ`, the propagator over an interval of length `l`
/// where `H = e_θe_θᵀ`. `(−J)e_θe_θᵀ` is nilpotent, so this is the exact
/// exponential.
pub fn transfer_matrix(theta: f64, l: f64, z: Complex64) -> Matrix2c {
    let (s, c) = theta.sin_cos();
    // (−J)e eᵀ with −J = [[0, 1], [−1, 0]]
    let n = Matrix2::new(s * c, s * s, -c * c, -c * s);
    Matrix2c::identity() + n.map(|x| c64(x, 0.0)) * (z * l)
}

/// Product of transfer matrices over the first `k` intervals, kept with its
/// largest entry of size one. The true propagator is `matrix · e^{log_scale}`.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub matrix: Matrix2c,
    pub log_scale: f64,
}

impl Propagator {
    pub fn identity() -> Self {
        Propagator { matrix: Matrix2c::identity(), log_scale: 0.0 }
    }

    /// Applies the next interval on the left and renormalizes.
    pub fn step(&mut self, theta: f64, l: f64, z: Complex64) -> Result<()> {
        self.matrix = transfer_matrix(theta, l, z) * self.matrix;
        let top = self.matrix.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        if !top.is_finite() || top == 0.0 {
            return Err(Error::Singular("propagator overflow".into()));
        }
        self.matrix /= c64(top, 0.0);
        self.log_scale += top.ln();
        let drift = (self.matrix.determinant() - self.tracked_det()).norm();
        if drift > DET_DRIFT_TOL {
            return Err(Error::DeterminantDrift { drift });
        }
        Ok(())
    }

    /// Determinant of `matrix` implied by unimodularity of the true product.
    pub fn tracked_det(&self) -> f64 {
        (-2.0 * self.log_scale).exp()
    }

    /// The unnormalized product. Overflows for long products.
    pub fn full(&self) -> Matrix2c {
        self.matrix * c64(self.log_scale.exp(), 0.0)
    }
}

/// Propagator `x(0) ↦ x(t_k)` of the system at `z`.
pub fn propagator(h: &StepHamiltonian, z: Complex64, k: usize) -> Result<Propagator> {
    if k > h.intervals() {
        return Err(Error::Dimension(format!("{k} intervals requested, {} available", h.intervals())));
    }
    let mut p = Propagator::identity();
    for (theta, l) in h.thetas().iter().zip(h.lengths()).take(k) {
        p.step(*theta, l, z)?;
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylDiskEstimate {
    pub lambda: Complex64,
    pub center: Complex64,
    /// `f64::INFINITY` when the Weyl circle is a line.
    pub radius: f64,
    pub truncation_t: f64,
    pub converged: bool,
}

impl WeylDiskEstimate {
    pub fn m_value(&self) -> Complex64 {
        self.center
    }

    pub fn error_bound(&self) -> f64 {
        self.radius
    }

    pub fn is_line(&self) -> bool {
        self.radius.is_infinite()
    }

    pub fn contains(&self, m: Complex64, slack: f64) -> bool {
        (m - self.center).norm() <= self.radius + slack
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EstimateWire::from(*self)).expect("plain numbers always serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct EstimateWire {
    lambda: [f64; 2],
    m: [f64; 2],
    /// `null` for a line.
    radius: Option<f64>,
    #[serde(rename = "T")]
    t: f64,
}

impl From<WeylDiskEstimate> for EstimateWire {
    fn from(e: WeylDiskEstimate) -> Self {
        EstimateWire {
            lambda: [e.lambda.re, e.lambda.im],
            m: [e.center.re, e.center.im],
            radius: e.radius.is_finite().then_some(e.radius),
            t: e.truncation_t,
        }
    }
}

/// The Weyl circle through all `m = −x₂(0)/x₁(0)` with `x(T)` on a real
/// boundary ray, from the normalized propagator `Φ = [[a, b], [c, d]]`:
/// `m(τ) = (−aτ + c)/(−bτ + d)` for `x(T) ∥ (1, τ)`, `τ ∈ ℝ ∪ {∞}`.
fn disk_from(p: &Propagator, lambda: Complex64, truncation_t: f64) -> WeylDiskEstimate {
    let m = &p.matrix;
    let (a, b, c, d) = (-m[(0, 0)], m[(1, 0)], -m[(0, 1)], m[(1, 1)]);
    let denom = d * c.conj() - c * d.conj();
    if denom.norm() == 0.0 {
        return WeylDiskEstimate { lambda, center: c64(f64::NAN, f64::NAN), radius: f64::INFINITY, truncation_t, converged: false };
    }
    let center = (b * c.conj() - a * d.conj()) / denom;
    let radius = p.tracked_det() / denom.norm();
    WeylDiskEstimate { lambda, center, radius, truncation_t, converged: false }
}

fn check_lambda(lambda: Complex64) -> Result<()> {
    if lambda.im == 0.0 || !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::Invalid(format!("λ = {lambda} must be finite and off the real axis")));
    }
    Ok(())
}

/// Weyl disk for the truncation `[0, T]`. `T` must be a breakpoint of `h`.
pub fn weyl_disk(h: &StepHamiltonian, lambda: Complex64, truncation_t: f64) -> Result<WeylDiskEstimate> {
    check_lambda(lambda)?;
    let k = h
        .breakpoints()
        .iter()
        .position(|&b| b == truncation_t)
        .filter(|&k| k > 0)
        .ok_or_else(|| Error::Invalid(format!("T = {truncation_t} is not a positive breakpoint")))?;
    let p = propagator(h, -lambda, k)?;
    Ok(disk_from(&p, lambda, truncation_t))
}

/// Weyl disks at the given breakpoint indices (ascending), sharing one pass
/// over the intervals.
pub fn weyl_disks_at(h: &StepHamiltonian, lambda: Complex64, indices: &[usize]) -> Result<Vec<WeylDiskEstimate>> {
    check_lambda(lambda)?;
    if indices.windows(2).any(|w| w[1] <= w[0]) || indices.first() == Some(&0) {
        return Err(Error::Invalid("indices must be positive and increasing".into()));
    }
    if let Some(&last) = indices.last() {
        if last > h.intervals() {
            return Err(Error::Dimension(format!("index {last} beyond {} intervals", h.intervals())));
        }
    }
    let (thetas, lengths, bps) = (h.thetas(), h.lengths(), h.breakpoints());
    let mut p = Propagator::identity();
    let mut done = 0;
    let mut out = Vec::with_capacity(indices.len());
    for &k in indices {
        while done < k {
            p.step(thetas[done], lengths[done], -lambda)?;
            done += 1;
        }
        out.push(disk_from(&p, lambda, bps[k]));
    }
    Ok(out)
}

/// Doubles the truncation point, starting at `t₁` and snapping up to the next
/// breakpoint, until the radius drops below `tol`. If the covered range runs
/// out first the last estimate is returned with `converged = false`.
pub fn m_canonical(h: &StepHamiltonian, lambda: Complex64, tol: f64) -> Result<WeylDiskEstimate> {
    check_lambda(lambda)?;
    if !(tol > 0.0) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let (thetas, lengths, bps) = (h.thetas(), h.lengths(), h.breakpoints());
    let mut p = Propagator::identity();
    let mut done = 0;
    let mut target = bps[1];
    loop {
        while done < h.intervals() && bps[done] < target {
            p.step(thetas[done], lengths[done], -lambda)?;
            done += 1;
        }
        let mut est = disk_from(&p, lambda, bps[done]);
        if est.radius < tol {
            est.converged = true;
            return Ok(est);
        }
        if done == h.intervals() {
            return Ok(est);
        }
        target = 2.0 * bps[done];
    }
}
