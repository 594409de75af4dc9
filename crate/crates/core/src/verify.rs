//! Named numerical check suites, one per property of the library that can be
//! confirmed against a closed form or a second construction.
//!
//! Each suite returns a [`Report`] listing every measured quantity with its
//! tolerance. `verify all` in the command line tool runs them in order.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use crate::canonical::m_canonical;
use crate::error::Result;
use crate::herglotz::{
    class_n0_interval_gram, nevanlinna_gram, random_n0_interval, random_nevanlinna, RealizedFunction, SampleSet,
};
use crate::jacobi::{build_j0, build_jhat0, m_resolvent, quadrature_m0, BlockJacobi, ChebyshevKind};
use crate::kac::{evaluate_h, gammahat_hamiltonian, hamiltonian_h0, hamiltonian_hn, kac_algorithm};
use crate::linalg::{self, c64, max_abs_diff, min_eigenvalue, op_norm, scaled_identity, CMatrix};
use crate::random;
use crate::realize::{bold_t, chain_a, simplicity_check, SubspaceRealization};
use crate::specialfn::{m0_gamma, m0_gammahat};
use crate::transforms::{gamma, gamma_hat, iterate_gamma_hat, RESIDUAL_FLOOR};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, tol, passed: value <= tol }
    }

    /// Passes when `value < tol`.
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, tol, passed: value < tol }
    }

    /// A yes/no check; `value` counts the violations.
    pub fn holds(name: impl Into<String>, violations: usize) -> Self {
        Check { name: name.into(), value: violations as f64, tol: 0.0, passed: violations == 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status} {} ({:.3} s)", self.suite, self.elapsed.as_secs_f64());
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  [{mark}] {}: {:.3e} (tol {})", c.name, c.value, crate::json::fmt_num(c.tol));
        }
        out
    }
}

type Suite = fn() -> Result<Vec<Check>>;

/// `(name, description, runner)`.
const SUITES: &[(&str, &str, Suite)] = [
    ("fixed-points", "closed-form fixed points of Γ and Γ̂", fixed_points as Suite),
    ("quadrature", "Gauss–Chebyshev quadrature against the fixed points", quadrature),
    ("contraction", "Γ̂ residual ratios from the zero start at λ = 2i", contraction),
    ("uniform", "Γ̂ convergence uniformly on a compact grid", uniform),
    ("truncation", "truncated J₀ and Ĵ₀ m-functions", truncation),
    ("wollen", "defect-space realization of Γ", wollen),
    ("chain", "chain operators realizing the Γ̂ iterates", chain),
    ("kac", "Kac algorithm on Ĵ₀ and the a₀ = 1 variant", kac),
    ("hn", "shifted Hamiltonians against Kac on shifted coefficients", hn),
    ("kac-canonical", "canonical-system m-functions against Jacobi m-functions", kac_canonical),
    ("kernels", "kernel Gram matrices and the defect-kernel identity", kernels),
    ("hamiltonian-scheme", "Γ̂ acting on Hamiltonians", hamiltonian_scheme),
]
.as_slice();

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

pub fn suite_listing() -> String {
    SUITES.iter().fold(String::new(), |mut out, (name, about, _)| {
        let _ = writeln!(out, "  {name:<20} {about}");
        out
    })
}

/// Runs a named suite; `None` if the name is unknown.
pub fn run_suite(name: &str) -> Option<Report> {
    let &(suite, _, run) = SUITES.iter().find(|s| s.0 == name)?;
    let start = Instant::now();
    let checks = match run() {
        Ok(checks) => checks,
        Err(e) => vec![Check { name: format!("error: {e}"), value: f64::NAN, tol: 0.0, passed: false }],
    };
    Some(Report { suite, checks, elapsed: start.elapsed() })
}

pub fn run_all() -> Vec<Report> {
    SUITES.iter().filter_map(|s| run_suite(s.0)).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| if n == 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 })
}

fn scalar(z: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

/// Diagonal `a` and off-diagonal `b` equal to Ĵ₀'s except in the leading entries.
pub fn perturbed_coefficients(a_head: &[f64], b_head: &[f64], len: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![0.0; len];
    let mut b = vec![1.0; len];
    a[..a_head.len()].copy_from_slice(a_head);
    b[..b_head.len()].copy_from_slice(b_head);
    (a, b)
}

/// Ĵ₀, the `a₀ = 1` variant, and seeded perturbations of Ĵ₀ in the first
/// eight coefficients.
pub fn coefficient_corpus(len: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = vec![perturbed_coefficients(&[], &[], len), perturbed_coefficients(&[1.0], &[], len)];
    let mut rng = random::rng(8);
    for _ in 0..4 {
        let a: Vec<f64> = (0..8).map(|_| rng.random_range(-0.6..0.6)).collect();
        let b: Vec<f64> = (0..8).map(|_| rng.random_range(0.7..1.3)).collect();
        out.push(perturbed_coefficients(&a, &b, len));
    }
    out
}

fn fixed_points() -> Result<Vec<Check>> {
    let mut grid = Vec::new();
    for re in linspace(-3.0, 3.0, 10) {
        for im in linspace(0.5, 5.0, 5) {
            grid.push(c64(re, im));
            grid.push(c64(re, -im));
        }
    }
    let mut hat = 0.0f64;
    for &lam in &grid {
        let m = scalar(m0_gammahat(lam)?);
        hat = hat.max(max_abs_diff(&gamma_hat(&m, lam)?, &m));
    }
    let mut checks = vec![Check::below("|Γ̂(ℳ₀) − ℳ₀| on 100 points", hat, 1e-12)];
    let mut with_real = grid.clone();
    with_real.extend([-4.0, -2.5, -1.5, 1.5, 2.5, 4.0].map(|x| c64(x, 0.0)));
    for d in [1, 3] {
        let mut err = 0.0f64;
        for &lam in &with_real {
            let m = scaled_identity(d, m0_gamma(lam)?);
            err = err.max(op_norm(&(gamma(&m, lam)? - &m)));
        }
        checks.push(Check::below(format!("‖Γ(M₀) − M₀‖, d = {d}"), err, 1e-12));
    }
    Ok(checks)
}

fn quadrature() -> Result<Vec<Check>> {
    let points: Vec<Complex64> = (0..20)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            c64(-2.4 + 0.25 * k as f64, sign * (0.5 + 0.08 * k as f64))
        })
        .collect();
    let (mut first, mut second) = (0.0f64, 0.0f64);
    for &lam in &points {
        first = first.max((quadrature_m0(lam, 10_000, ChebyshevKind::First)? - m0_gamma(lam)?).norm());
        second = second.max((quadrature_m0(lam, 10_000, ChebyshevKind::Second)? - m0_gammahat(lam)?).norm());
    }
    Ok(vec![
        Check::below("first kind vs −1/√(λ²−1)", first, 1e-10),
        Check::below("second kind vs (−λ+√(λ²−4))/2", second, 1e-10),
    ])
}

fn contraction() -> Result<Vec<Check>> {
    let trace = iterate_gamma_hat(&RealizedFunction::zero(1), c64(0.0, 2.0), 30)?;
    let mut worst = 0.0f64;
    for (k, &q) in trace.ratios.iter().enumerate() {
        if trace.residuals[k] > RESIDUAL_FLOOR {
            worst = worst.max(q);
        }
    }
    Ok(vec![
        Check::at_most("max r_{n+1}/r_n above the floor", worst, 0.25 + 1e-10),
        Check::at_most("residual at n = 30", trace.final_residual(), 1e-14),
    ])
}

fn uniform() -> Result<Vec<Check>> {
    let zero = RealizedFunction::zero(1);
    let mut worst = 0.0f64;
    for re in linspace(1.0, 2.0, 20) {
        for im in linspace(1.5, 2.5, 20) {
            worst = worst.max(iterate_gamma_hat(&zero, c64(re, im), 20)?.final_residual());
        }
    }
    Ok(vec![Check::below("max residual at n = 20 on 20×20 grid", worst, 1e-10)])
}

fn truncation() -> Result<Vec<Check>> {
    let lam = c64(1.0, 2.0);
    let hat = (m_resolvent(&build_jhat0(1, 200)?, lam)?[(0, 0)] - m0_gammahat(lam)?).norm();
    let lam = c64(0.0, 2.0);
    let first = (m_resolvent(&build_j0(1, 400)?, lam)?[(0, 0)] - m0_gamma(lam)?).norm();
    Ok(vec![
        Check::below("Ĵ₀, N = 200, λ = 1+2i", hat, 1e-8),
        Check::below("J₀, N = 400, λ = 2i", first, 1e-10),
    ])
}

fn off_interval_point<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = c64(rng.random_range(-2.5..2.5), rng.random_range(-2.0..2.0));
        if z.im.abs() > 0.05 || z.re.abs() > 1.1 {
            return z;
        }
    }
}

fn wollen() -> Result<Vec<Check>> {
    let mut rng = random::rng(6);
    let (mut err, mut norm, mut lost) = (0.0f64, 0.0f64, 0);
    for _ in 0..10 {
        let t = random::random_hermitian_contraction(&mut rng, 12);
        let q = random::random_isometry(&mut rng, 12, 3);
        let r = SubspaceRealization::new(t, q)?;
        let b = bold_t(&r)?;
        norm = norm.max(op_norm(b.operator()));
        if simplicity_check(&r).is_simple && !simplicity_check(&b).is_simple {
            lost += 1;
        }
        for _ in 0..20 {
            let lam = off_interval_point(&mut rng);
            let rhs = gamma(&r.m_function(lam)?, lam)?;
            err = err.max(max_abs_diff(&b.m_function(lam)?, &rhs));
        }
    }
    Ok(vec![
        Check::below("compressed resolvent vs M⁻¹/(λ²−1)", err, 1e-10),
        Check::at_most("‖bold T‖", norm, 1.0 + 1e-12),
        Check::holds("simple realizations losing simplicity", lost),
    ])
}

fn chain() -> Result<Vec<Check>> {
    let mut rng = random::rng(7);
    let (mut err, mut corners) = (0.0f64, 0);
    for _ in 0..5 {
        let (d, h) = (2, 4);
        let k = random::random_with_norm(&mut rng, h, d, 0.9);
        let t_hat = random::random_hermitian(&mut rng, h, -1.5, 1.5);
        let start = RealizedFunction::realization(t_hat.clone(), k.clone())?;
        for n in 1..=6 {
            let c = chain_a(&k, &t_hat, n)?;
            let corner = linalg::block(&c.assembled, 0, 0, n * d, n * d);
            if corner != build_jhat0(d, n.max(2))?.truncate(n)?.to_dense() {
                corners += 1;
            }
            for _ in 0..30 {
                let lam = random::random_point(&mut rng, 2.0, 0.1, 2.0);
                let lam = if rng.random_bool(0.5) { lam } else { lam.conj() };
                let trace = iterate_gamma_hat(&start, lam, n)?;
                err = err.max(max_abs_diff(&c.compressed_resolvent(lam)?, &trace.values[n - 1]));
            }
        }
    }
    Ok(vec![
        Check::below("compressed resolvent of Â_n vs Γ̂ⁿ(F)", err, 1e-10),
        Check::holds("corners differing from the Ĵ₀ truncation", corners),
    ])
}

fn kac() -> Result<Vec<Check>> {
    let (a, b) = perturbed_coefficients(&[], &[], 60);
    let h = kac_algorithm(&a, &b, 51)?;
    let mut err = 0.0f64;
    for (j, (&th, l)) in h.thetas().iter().zip(h.lengths()).enumerate() {
        err = err.max((l - 1.0).abs()).max((th - (j + 1) as f64 * FRAC_PI_2).abs());
    }
    let mut bad_first = 0;
    let expect = nalgebra::Matrix2::new(0.0, 0.0, 0.0, 1.0);
    for (a, b) in coefficient_corpus(40) {
        let h = kac_algorithm(&a, &b, 30)?;
        let first = evaluate_h(&h, 0.5)?;
        if h.breakpoints()[1] != 1.0 || (first - expect).abs().max() > 1e-15 {
            bad_first += 1;
        }
    }
    let (a, b) = perturbed_coefficients(&[1.0], &[], 10);
    let h = kac_algorithm(&a, &b, 3)?;
    let variant = (h.thetas()[1] - 5.0 * PI / 4.0)
        .abs()
        .max((h.lengths()[1] - 2.0).abs())
        .max((h.thetas()[2] - 1.5 * PI).abs());
    Ok(vec![
        Check::at_most("Ĵ₀: l_j = 1, θ_j = (j+1)π/2, j ≤ 50", err, 1e-12),
        Check::holds("first intervals other than [[0,0],[0,1]] on [0,1)", bad_first),
        Check::at_most("a₀ = 1: (θ₁, l₁, θ₂) = (5π/4, 2, 3π/2)", variant, 1e-12),
    ])
}

fn hn() -> Result<Vec<Check>> {
    let sets = [
        perturbed_coefficients(&[1.0], &[], 40),
        perturbed_coefficients(&[0.4, -0.7, 0.2], &[0.9, 1.2, 0.75], 40),
    ];
    let (mut err, mut prefix) = (0.0f64, 0);
    for (a, b) in &sets {
        let h = kac_algorithm(a, b, 30)?;
        for n in 1..=8 {
            let mut sa = vec![0.0; n];
            let mut sb = vec![1.0; n];
            sa.extend_from_slice(a);
            sb.extend_from_slice(b);
            let direct = kac_algorithm(&sa, &sb, 30 + n)?;
            let shifted = hamiltonian_hn(&h, n)?;
            for (x, y) in direct.thetas().iter().zip(shifted.thetas()) {
                err = err.max((x - y).abs());
            }
            for (x, y) in direct.breakpoints().iter().zip(shifted.breakpoints()) {
                err = err.max((x - y).abs());
            }
            if direct.intervals() != shifted.intervals() {
                err = f64::INFINITY;
            }
            if shifted.prefix(n + 1)? != hamiltonian_h0(n + 1)? {
                prefix += 1;
            }
        }
    }
    Ok(vec![
        Check::at_most("angles and breakpoints, n ≤ 8", err, 1e-12),
        Check::holds("prefixes on [0, n+1) differing from H₀", prefix),
    ])
}

fn kac_canonical() -> Result<Vec<Check>> {
    let lam = c64(0.0, 2.0);
    let e = m_canonical(&hamiltonian_h0(400)?, lam, 1e-6)?;
    let anchor = (e.m_value() - c64(0.0, 2f64.sqrt() - 1.0)).norm();
    let (a, b) = perturbed_coefficients(&[1.0], &[], 300);
    let variant = m_canonical(&kac_algorithm(&a, &b, 200)?, lam, 1e-6)?;
    let oracle = -1.0 / (lam - 1.0 + m0_gammahat(lam)?);
    let mut checks = vec![
        Check::below("H₀ at 2i vs (√2−1)i", anchor, 1e-6),
        Check::below("H₀ certified radius", e.radius, 1e-6),
        Check::at_most("H₀ truncation point", e.truncation_t, 60.0),
        Check::below("a₀ = 1 vs −1/(λ − 1 + ℳ₀(λ))", (variant.m_value() - oracle).norm(), 2e-6),
    ];
    let mut worst = 0.0f64;
    let mut unconverged = 0;
    for (a, b) in coefficient_corpus(500) {
        let h = kac_algorithm(&a, &b, 400)?;
        let j = BlockJacobi::scalar(&a, &b[..a.len() - 1])?;
        for lam in [c64(0.0, 2.0), c64(1.0, 1.0), c64(-0.5, 0.8), c64(0.2, -1.5)] {
            let e = m_canonical(&h, lam, 1e-6)?;
            if !e.converged {
                unconverged += 1;
            }
            worst = worst.max((e.m_value() - m_resolvent(&j, lam)?[(0, 0)]).norm());
        }
    }
    checks.push(Check::below("corpus: canonical vs Jacobi", worst, 2e-6));
    checks.push(Check::holds("corpus: Weyl disks not below 1e-6", unconverged));
    Ok(checks)
}

fn sample_points<R: Rng>(rng: &mut R, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let z = random::random_point(rng, 2.0, 0.1, 2.0);
            if rng.random_bool(0.5) {
                z
            } else {
                z.conj()
            }
        })
        .collect()
}

fn relative_negativity(g: &CMatrix) -> f64 {
    (-min_eigenvalue(g)).max(0.0) / (1.0 + op_norm(g))
}

fn kernels() -> Result<Vec<Check>> {
    let mut rng = random::rng(11);
    let (mut nev, mut interval, mut dual) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..50u64 {
        let d = 1 + (seed as usize % 3);
        let samples = SampleSet::new(sample_points(&mut rng, 8))?;
        let general = random_nevanlinna(seed, d, 7)?;
        let contractive = random_n0_interval(seed + 500, d, 7)?;
        nev = nev.max(relative_negativity(&nevanlinna_gram(&general, &samples)?));
        nev = nev.max(relative_negativity(&nevanlinna_gram(&contractive, &samples)?));
        let g = class_n0_interval_gram(&contractive, &samples)?;
        interval = interval.max(relative_negativity(&g));

        let RealizedFunction::Realization { t, k } = &contractive else { unreachable!() };
        let n = t.nrows();
        let defect = linalg::identity(n) - t * t;
        let pts = samples.points();
        for (p, &lam) in pts.iter().enumerate() {
            for (q, &xi) in pts.iter().enumerate() {
                // K*(T − λ)⁻¹ = ((T − λ̄)⁻¹K)*
                let left = linalg::solve(&(t - scaled_identity(n, lam.conj())), k)?.adjoint();
                let right = linalg::solve(&(t - scaled_identity(n, xi.conj())), k)?;
                let direct = left * &defect * right;
                let block = linalg::block(&g, p * d, q * d, d, d);
                dual = dual.max(max_abs_diff(&block, &direct));
            }
        }
    }
    Ok(vec![
        Check::at_most("Nevanlinna Gram, relative negativity", nev, 1e-10),
        Check::at_most("interval-class Gram, relative negativity", interval, 1e-10),
        Check::below("kernel vs K*(T−λ)⁻¹(I−T²)(T−ξ̄)⁻¹K", dual, 1e-11),
    ])
}

fn hamiltonian_scheme() -> Result<Vec<Check>> {
    let mut fixed = 0;
    for m in [1, 2, 10, 200] {
        if gammahat_hamiltonian(&hamiltonian_h0(m)?)? != hamiltonian_h0(m + 1)? {
            fixed += 1;
        }
    }
    let mut err = 0.0f64;
    for (a, b) in coefficient_corpus(60) {
        let h = kac_algorithm(&a, &b, 50)?;
        let g = gammahat_hamiltonian(&h)?;
        let s = hamiltonian_hn(&h, 1)?;
        if g.intervals() != s.intervals() {
            err = f64::INFINITY;
        }
        for (x, y) in g.thetas().iter().zip(s.thetas()).chain(g.breakpoints().iter().zip(s.breakpoints())) {
            err = err.max((x - y).abs());
        }
    }
    Ok(vec![
        Check::holds("Γ̂-scheme images of H₀ differing from H₀", fixed),
        Check::at_most("Γ̂-scheme vs first shift on the corpus", err, 1e-12),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for report in run_all() {
            assert!(report.passed(), "{}", report.render());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope").is_none());
        assert!(suite_listing().contains("kac-canonical"));
        assert_eq!(suite_names().len(), 12);
    }
}
