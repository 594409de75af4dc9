//! Step Hamiltonians from scalar Jacobi coefficients.
//!
//! A [`StepHamiltonian`] is the rank-one, trace-one function
//! `H(t) = e_θ e_θᵀ` with `e_θ = (cos θ, sin θ)` and `θ` constant on each
//! interval `[t_j, t_{j+1})`. Angles are stored unreduced, so along a
//! Hamiltonian built by [`kac_algorithm`] they increase strictly.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::BlockJacobi;

/// `|sin(θ_{j+1} − θ_j)|` below this is a degenerate step.
pub const DEGENERATE_SIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianWire", into = "HamiltonianWire")]
pub struct StepHamiltonian {
    breakpoints: Vec<f64>,
    thetas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianWire {
    breakpoints: Vec<f64>,
    thetas: Vec<f64>,
}

impl TryFrom<HamiltonianWire> for StepHamiltonian {
    type Error = String;

    fn try_from(w: HamiltonianWire) -> std::result::Result<Self, String> {
        StepHamiltonian::new(w.breakpoints, w.thetas).map_err(|e| e.to_string())
    }
}

impl From<StepHamiltonian> for HamiltonianWire {
    fn from(h: StepHamiltonian) -> Self {
        HamiltonianWire { breakpoints: h.breakpoints, thetas: h.thetas }
    }
}

impl StepHamiltonian {
    /// `breakpoints` are `t₀ = 0 < t₁ < … < t_m`, `thetas` the `m` angles.
    pub fn new(breakpoints: Vec<f64>, thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || breakpoints.len() != thetas.len() + 1 {
            return Err(Error::Dimension(format!(
                "{} breakpoints for {} intervals",
                breakpoints.len(),
                thetas.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::Invalid("first breakpoint must be 0".into()));
        }
        if breakpoints.iter().chain(&thetas).any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite breakpoint or angle".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("breakpoints must increase strictly".into()));
        }
        Ok(StepHamiltonian { breakpoints, thetas })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn intervals(&self) -> usize {
        self.thetas.len()
    }

    /// Right end `t_m` of the covered range.
    pub fn end(&self) -> f64 {
        *self.breakpoints.last().expect("at least one interval")
    }

    /// Index of the interval containing `t`; `t = t_m` belongs to the last one.
    pub fn interval_of(&self, t: f64) -> Result<usize> {
        if !(0.0..=self.end()).contains(&t) {
            return Err(Error::OutOfRange { t, end: self.end() });
        }
        let j = self.breakpoints.partition_point(|&b| b <= t);
        Ok((j - 1).min(self.intervals() - 1))
    }

    /// The first `m` intervals.
    pub fn prefix(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.intervals() {
            return Err(Error::Dimension(format!("prefix of {m} from {} intervals", self.intervals())));
        }
        StepHamiltonian::new(self.breakpoints[..=m].to_vec(), self.thetas[..m].to_vec())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain numbers always serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

/// `e_θ e_θᵀ`.
pub fn projector(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c * c, c * s, c * s, s * s)
}

pub fn evaluate_h(h: &StepHamiltonian, t: f64) -> Result<Matrix2<f64>> {
    Ok(projector(h.thetas[h.interval_of(t)?]))
}

/// Kac algorithm for a scalar Jacobi matrix with diagonal `a` and
/// off-diagonal `b`, returning the first `m` intervals.
///
/// Needs `a[0..m-1]` and `b[0..m-1]`.
pub fn kac_algorithm(a: &[f64], b: &[f64], m: usize) -> Result<StepHamiltonian> {
    if m == 0 {
        return Err(Error::Invalid("need at least one interval".into()));
    }
    if a.len() < m - 1 || b.len() < m - 1 {
        return Err(Error::Dimension(format!(
            "{m} intervals need {} coefficients, got a: {}, b: {}",
            m - 1,
            a.len(),
            b.len()
        )));
    }
    if let Some(k) = b[..m - 1].iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Invalid(format!("b[{k}] must be positive")));
    }
    if a[..m - 1].iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("non-finite diagonal coefficient".into()));
    }

    // the recursion only needs the steps δ_j = θ_j − θ_{j−1}; carrying them
    // directly avoids differencing large unreduced angles
    let mut thetas = Vec::with_capacity(m);
    let mut breakpoints = Vec::with_capacity(m + 1);
    let (mut theta, mut delta, mut l) = (FRAC_PI_2, FRAC_PI_2, 1.0);
    breakpoints.push(0.0);
    for j in 0..m {
        thetas.push(theta);
        breakpoints.push(breakpoints[j] + l);
        if j + 1 == m {
            break;
        }
        let c = -a[j] * l - delta.cos() / delta.sin();
        let next_delta = FRAC_PI_2 - c.atan();
        let s = next_delta.sin();
        if s.abs() < DEGENERATE_SIN {
            return Err(Error::DegenerateStep { step: j + 1 });
        }
        let next_l = 1.0 / (l * b[j] * b[j] * s * s);
        if !next_l.is_finite() || next_l <= 0.0 {
            return Err(Error::DegenerateStep { step: j + 1 });
        }
        (theta, delta, l) = (theta + next_delta, next_delta, next_l);
    }
    StepHamiltonian::new(breakpoints, thetas)
}

/// [`kac_algorithm`] on the coefficients of a scalar Jacobi matrix.
pub fn kac_from_jacobi(j: &BlockJacobi, m: usize) -> Result<StepHamiltonian> {
    let (a, b) = j
        .scalar_coefficients()
        .ok_or_else(|| Error::Unsupported("the Kac algorithm is scalar only".into()))?;
    kac_algorithm(&a, &b, m)
}

/// Unit intervals with `θ_j = (j+1)π/2`.
pub fn hamiltonian_h0(m: usize) -> Result<StepHamiltonian> {
    if m == 0 {
        return Err(Error::Invalid("need at least one interval".into()));
    }
    let breakpoints = (0..=m).map(|j| j as f64).collect();
    let thetas = (0..m).map(|j| (j + 1) as f64 * FRAC_PI_2).collect();
    StepHamiltonian::new(breakpoints, thetas)
}

/// `H₀` on `[0, n+1)`, then on `[t_j + n, t_{j+1} + n)` the angle `θ_j + nπ/2`.
///
/// `θ_j + nπ/2` is the angle of `(−1)ⁿH(t−n) + ½(1 − (−1)ⁿ)I`.
pub fn hamiltonian_hn(h: &StepHamiltonian, n: usize) -> Result<StepHamiltonian> {
    if n == 0 {
        return Err(Error::Invalid("shift must be at least 1".into()));
    }
    check_kac_start(h)?;
    let mut breakpoints: Vec<f64> = (0..=n + 1).map(|j| j as f64).collect();
    let mut thetas: Vec<f64> = (0..=n).map(|j| (j + 1) as f64 * FRAC_PI_2).collect();
    for j in 1..h.intervals() {
        breakpoints.push(h.breakpoints[j + 1] + n as f64);
        thetas.push(add_quarter_turns(h.thetas[j], n));
    }
    StepHamiltonian::new(breakpoints, thetas)
}

/// `H₀` on `[0, 2)` and `I − H(t − 1)` after.
pub fn gammahat_hamiltonian(h: &StepHamiltonian) -> Result<StepHamiltonian> {
    check_kac_start(h)?;
    let mut breakpoints = vec![0.0, 1.0, 2.0];
    let mut thetas = vec![FRAC_PI_2, PI];
    for j in 1..h.intervals() {
        breakpoints.push(h.breakpoints[j + 1] + 1.0);
        // I − e_θe_θᵀ = e_{θ+π/2}e_{θ+π/2}ᵀ
        thetas.push(add_quarter_turns(h.thetas[j], 1));
    }
    StepHamiltonian::new(breakpoints, thetas)
}

/// `θ + nπ/2`, computed as `(k + n)·π/2 + r` for `θ = k·π/2 + r`, so that
/// angles of the form `k·π/2` map to `(k + n)·π/2` bit for bit.
pub fn add_quarter_turns(theta: f64, n: usize) -> f64 {
    let k = (theta / FRAC_PI_2).round();
    let r = theta - k * FRAC_PI_2;
    (k + n as f64) * FRAC_PI_2 + r
}

fn check_kac_start(h: &StepHamiltonian) -> Result<()> {
    let first = h.thetas[0];
    let reduced = (first - FRAC_PI_2).rem_euclid(PI);
    if h.breakpoints[1] != 1.0 || reduced.min(PI - reduced) > 1e-12 {
        return Err(Error::Invalid("expected a first interval [0, 1) with θ = π/2".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perturbed(a_head: &[f64], b_head: &[f64], len: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = vec![0.0; len];
        let mut b = vec![1.0; len];
        a[..a_head.len()].copy_from_slice(a_head);
        b[..b_head.len()].copy_from_slice(b_head);
        (a, b)
    }

    #[test]
    fn jhat0_gives_unit_steps() {
        let h = kac_algorithm(&[0.0; 60], &[1.0; 60], 51).unwrap();
        for (j, (&th, l)) in h.thetas().iter().zip(h.lengths()).enumerate() {
            assert!((l - 1.0).abs() < 1e-12);
            assert!((th - (j + 1) as f64 * FRAC_PI_2).abs() < 1e-12);
        }
        let h0 = hamiltonian_h0(51).unwrap();
        for (x, y) in h.thetas().iter().zip(h0.thetas()) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in h.breakpoints().iter().zip(h0.breakpoints()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_first_coefficient() {
        let (a, b) = perturbed(&[1.0], &[], 5);
        let h = kac_algorithm(&a, &b, 3).unwrap();
        assert!((h.thetas()[1] - 5.0 * PI / 4.0).abs() < 1e-12);
        assert!((h.lengths()[1] - 2.0).abs() < 1e-12);
        assert!((h.thetas()[2] - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn coefficient_requirements() {
        assert!(kac_algorithm(&[], &[], 1).is_ok());
        assert!(matches!(kac_algorithm(&[0.0], &[1.0], 3), Err(Error::Dimension(_))));
        assert!(matches!(kac_algorithm(&[0.0, 0.0], &[1.0, -1.0], 3), Err(Error::Invalid(_))));
        assert!(kac_algorithm(&[0.0], &[1.0], 0).is_err());
        let block = crate::jacobi::build_jhat0(2, 4).unwrap();
        assert!(matches!(kac_from_jacobi(&block, 3), Err(Error::Unsupported(_))));
        let scalar = crate::jacobi::build_jhat0(1, 6).unwrap();
        assert_eq!(kac_from_jacobi(&scalar, 6).unwrap(), kac_algorithm(&[0.0; 5], &[1.0; 5], 6).unwrap());
    }

    #[test]
    fn evaluation() {
        let h = hamiltonian_h0(3).unwrap();
        let close = |m: Matrix2<f64>, e: [f64; 4]| (m - Matrix2::new(e[0], e[1], e[2], e[3])).abs().max() < 1e-15;
        assert!(close(evaluate_h(&h, 0.0).unwrap(), [0.0, 0.0, 0.0, 1.0]));
        assert!(close(evaluate_h(&h, 0.999).unwrap(), [0.0, 0.0, 0.0, 1.0]));
        assert!(close(evaluate_h(&h, 1.0).unwrap(), [1.0, 0.0, 0.0, 0.0]));
        assert!(close(evaluate_h(&h, 2.5).unwrap(), [0.0, 0.0, 0.0, 1.0]));
        assert!(close(evaluate_h(&h, 3.0).unwrap(), [0.0, 0.0, 0.0, 1.0]));
        assert!(close(projector(PI / 4.0), [0.5, 0.5, 0.5, 0.5]));
        assert!(matches!(evaluate_h(&h, 3.01), Err(Error::OutOfRange { .. })));
        assert!(evaluate_h(&h, -0.5).is_err());
    }

    #[test]
    fn construction_validates() {
        assert!(StepHamiltonian::new(vec![0.0, 1.0], vec![0.0]).is_ok());
        assert!(StepHamiltonian::new(vec![0.5, 1.0], vec![0.0]).is_err());
        assert!(StepHamiltonian::new(vec![0.0, 1.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(StepHamiltonian::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(StepHamiltonian::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn h0_is_fixed() {
        let h0 = hamiltonian_h0(500).unwrap();
        assert_eq!(gammahat_hamiltonian(&h0).unwrap(), hamiltonian_h0(501).unwrap());
        for n in 1..=12 {
            assert_eq!(hamiltonian_hn(&h0, n).unwrap(), hamiltonian_h0(500 + n).unwrap());
        }
    }

    #[test]
    fn gammahat_scheme_equals_first_shift() {
        let (a, b) = perturbed(&[1.0, -0.3], &[0.8], 30);
        let h = kac_algorithm(&a, &b, 25).unwrap();
        let g = gammahat_hamiltonian(&h).unwrap();
        assert_eq!(g, hamiltonian_hn(&h, 1).unwrap());
        assert_eq!(&g.thetas()[..2], &[FRAC_PI_2, PI]);
        // on [2, ∞) it is I − H(t − 1)
        for &t in &[2.0, 2.5, 3.7, 10.2, g.end()] {
            let lhs = evaluate_h(&g, t).unwrap();
            let rhs = Matrix2::identity() - evaluate_h(&h, t - 1.0).unwrap();
            assert!((lhs - rhs).abs().max() < 1e-12);
        }
        assert!(hamiltonian_hn(&h, 0).is_err());
        let bad = StepHamiltonian::new(vec![0.0, 1.0], vec![0.3]).unwrap();
        assert!(gammahat_hamiltonian(&bad).is_err());
    }

    #[test]
    fn hn_matches_kac_on_shifted_coefficients() {
        for (a_head, b_head) in [(vec![1.0], vec![]), (vec![0.4, -0.7, 0.2], vec![0.9, 1.2, 0.75])] {
            let (a, b) = perturbed(&a_head, &b_head, 40);
            let h = kac_algorithm(&a, &b, 30).unwrap();
            for n in 1..=8 {
                let mut sa = vec![0.0; n];
                let mut sb = vec![1.0; n];
                sa.extend_from_slice(&a);
                sb.extend_from_slice(&b);
                let direct = kac_algorithm(&sa, &sb, 30 + n).unwrap();
                let shifted = hamiltonian_hn(&h, n).unwrap();
                assert_eq!(direct.intervals(), shifted.intervals());
                for (x, y) in direct.thetas().iter().zip(shifted.thetas()) {
                    assert!((x - y).abs() < 1e-12, "n = {n}: {x} vs {y}");
                }
                for (x, y) in direct.breakpoints().iter().zip(shifted.breakpoints()) {
                    assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()), "n = {n}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let (a, b) = perturbed(&[0.3], &[1.1], 10);
        let h = kac_algorithm(&a, &b, 8).unwrap();
        assert_eq!(StepHamiltonian::from_json(&h.to_json()).unwrap(), h);
        assert!(StepHamiltonian::from_json(r#"{"breakpoints":[0,2,1],"thetas":[1,2]}"#).is_err());
    }

    fn corpus() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (
            prop::collection::vec(-0.6f64..0.6, 8),
            prop::collection::vec(0.7f64..1.3, 8),
        )
            .prop_map(|(ah, bh)| perturbed(&ah, &bh, 40))
    }

    proptest! {
        #[test]
        fn kac_invariants((a, b) in corpus()) {
            let m = 40;
            let h = kac_algorithm(&a, &b, m).unwrap();
            prop_assert_eq!(h.thetas()[0], FRAC_PI_2);
            prop_assert_eq!(h.breakpoints()[1], 1.0);
            for w in h.thetas().windows(2) {
                prop_assert!(w[1] > w[0] && w[1] < w[0] + PI);
            }
            // recorded ε = 0.05 over this corpus
            prop_assert!(h.end() > m as f64 * 0.05);
            for j in 0..m {
                let t = 0.5 * (h.breakpoints()[j] + h.breakpoints()[j + 1]);
                let e = evaluate_h(&h, t).unwrap();
                prop_assert!((e.trace() - 1.0).abs() < 1e-15);
                prop_assert!(e.determinant().abs() < 1e-15);
                prop_assert!(e[(0, 1)] == e[(1, 0)] && e[(0, 0)] >= 0.0 && e[(1, 1)] >= 0.0);
            }
            for k in 1..m {
                let p = kac_algorithm(&a, &b, k).unwrap();
                prop_assert_eq!(&p, &h.prefix(k).unwrap());
            }
        }

        #[test]
        fn hn_prefix_is_h0((a, b) in corpus(), n in 1usize..=10) {
            let h = kac_algorithm(&a, &b, 20).unwrap();
            let hn = hamiltonian_hn(&h, n).unwrap();
            let h0 = hamiltonian_h0(n + 1).unwrap();
            prop_assert_eq!(&hn.prefix(n + 1).unwrap(), &h0);
        }
    }
}
