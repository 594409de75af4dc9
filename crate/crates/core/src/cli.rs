//! Command implementations behind the `nevanlinna` binary.
//!
//! Every command writes its data product (CSV or JSON) to `out` and human
//! readable diagnostics to `log`, and fails with a [`CliError`] carrying the
//! process exit code.

use std::fmt;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::canonical::m_canonical;
use crate::error::Error;
use crate::herglotz::{nevanlinna_gram, random_n0_interval, random_nevanlinna, RealizedFunction, SampleSet};
use crate::jacobi::{build_j0, build_jhat0, m_cf, m_resolvent, BlockJacobi};
use crate::json::fmt_num;
use crate::kac::{evaluate_h, kac_from_jacobi, StepHamiltonian};
use crate::linalg::{c64, is_psd, max_abs_diff};
use crate::transforms::iterate_gamma_hat;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError::new(EXIT_PARSE, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported(_) => EXIT_UNSUPPORTED,
            _ => EXIT_PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(format!("i/o error: {e}"))
    }
}

pub type CliResult = std::result::Result<(), CliError>;

pub fn read_input(path: &Path) -> std::result::Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

/// `RE,IM`.
pub fn parse_lambda(s: &str) -> std::result::Result<Complex64, CliError> {
    let bad = || CliError::parse(format!("expected RE,IM, got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(c64(re, im))
}

/// Rectangular grid `re0:re1:n,im0:im1:n` with a guard `|Im λ| ≥ floor`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
    pub floor: f64,
}

pub const DEFAULT_FLOOR: f64 = 1e-6;

impl GridSpec {
    pub fn parse(s: &str, floor: f64) -> std::result::Result<Self, CliError> {
        let bad = |why: &str| CliError::parse(format!("bad grid {s:?}: {why}"));
        let (re, im) = s.split_once(',').ok_or_else(|| bad("expected re0:re1:n,im0:im1:n"))?;
        let axis = |part: &str| -> std::result::Result<(f64, f64, usize), CliError> {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(bad("each axis is lo:hi:count"));
            }
            let lo: f64 = f[0].trim().parse().map_err(|_| bad("bad bound"))?;
            let hi: f64 = f[1].trim().parse().map_err(|_| bad("bad bound"))?;
            let n: usize = f[2].trim().parse().map_err(|_| bad("bad count"))?;
            if !lo.is_finite() || !hi.is_finite() || n == 0 {
                return Err(bad("bounds must be finite and counts at least 1"));
            }
            Ok((lo, hi, n))
        };
        let (re_min, re_max, n_re) = axis(re)?;
        let (im_min, im_max, n_im) = axis(im)?;
        if !(floor > 0.0) {
            return Err(bad("floor must be positive"));
        }
        Ok(GridSpec { re_min, re_max, n_re, im_min, im_max, n_im, floor })
    }

    /// The single point `λ`.
    pub fn point(lambda: Complex64, floor: f64) -> Self {
        GridSpec { re_min: lambda.re, re_max: lambda.re, n_re: 1, im_min: lambda.im, im_max: lambda.im, n_im: 1, floor }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
    }

    /// Row-major in the real part: all imaginary parts for the first real
    /// part, then the next.
    pub fn points(&self) -> Vec<Complex64> {
        let ims = GridSpec::axis(self.im_min, self.im_max, self.n_im);
        GridSpec::axis(self.re_min, self.re_max, self.n_re)
            .into_iter()
            .flat_map(|re| ims.iter().map(move |&im| c64(re, im)))
            .collect()
    }

    pub fn check_floor(&self) -> CliResult {
        if self.points().iter().any(|p| p.im.abs() < self.floor) {
            return Err(CliError::new(EXIT_PRECONDITION, "grid violates half-plane floor"));
        }
        Ok(())
    }
}

/// m-function of a Jacobi matrix on a grid, by block elimination and by the
/// continued fraction. The CSV has the elimination values.
pub fn cmd_mfun(jacobi_json: &str, grid: &GridSpec, out: &mut dyn Write, log: &mut dyn Write) -> CliResult {
    let j = BlockJacobi::from_json(jacobi_json).map_err(|e| CliError::parse(format!("bad Jacobi file: {e}")))?;
    grid.check_floor()?;
    let d = j.block_dim();
    let mut header = vec!["re_lambda".to_string(), "im_lambda".to_string()];
    for r in 0..d {
        for c in 0..d {
            header.push(format!("re_m{r}{c}"));
            header.push(format!("im_m{r}{c}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    let mut discrepancy = 0.0f64;
    for lam in grid.points() {
        let m = m_resolvent(&j, lam)?;
        discrepancy = discrepancy.max(max_abs_diff(&m, &m_cf(&j, lam)?));
        let mut row = vec![fmt_num(lam.re), fmt_num(lam.im)];
        for r in 0..d {
            for c in 0..d {
                row.push(fmt_num(m[(r, c)].re));
                row.push(fmt_num(m[(r, c)].im));
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    writeln!(log, "max |m_resolvent − m_cf| = {discrepancy:e}")?;
    Ok(())
}

/// Points used to screen a starting function with the Nevanlinna kernel.
const SCREEN_POINTS: [(f64, f64); 8] =
    [(0.0, 2.0), (0.5, 1.0), (-1.0, 0.5), (2.0, 3.0), (0.0, -2.0), (-0.5, -1.0), (1.0, -0.5), (-2.0, -3.0)];

/// Whether `f` passes validation and the Nevanlinna kernel test on a fixed
/// sample.
pub fn screen_start(f: &RealizedFunction) -> std::result::Result<(), String> {
    f.validate().map_err(|e| e.to_string())?;
    let samples = SampleSet::new(SCREEN_POINTS.iter().map(|&(x, y)| c64(x, y)).collect()).expect("fixed sample is valid");
    let g = nevanlinna_gram(f, &samples).map_err(|e| e.to_string())?;
    if !is_psd(&g) {
        return Err("Nevanlinna kernel Gram matrix is not positive semidefinite".into());
    }
    Ok(())
}

/// Γ̂ iteration at `λ` from a start read from JSON, or from the zero function
/// of dimension `dim` when `start_json` is `None`.
pub fn cmd_iterate(
    start_json: Option<&str>,
    dim: usize,
    lambda: Complex64,
    steps: usize,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> CliResult {
    if steps == 0 {
        return Err(CliError::parse("--n must be at least 1"));
    }
    let start = match start_json {
        None => {
            if dim == 0 {
                return Err(CliError::parse("--dim must be at least 1"));
            }
            RealizedFunction::zero(dim)
        }
        Some(text) => {
            let f = RealizedFunction::from_json_unchecked(text).map_err(|e| CliError::parse(format!("bad start file: {e}")))?;
            if let Err(Error::Dimension(e)) = f.validate() {
                return Err(CliError::parse(format!("bad start file: {e}")));
            }
            if let Err(why) = screen_start(&f) {
                writeln!(log, "warning: start is not a Nevanlinna function ({why}); iterating anyway")?;
            }
            f
        }
    };
    if lambda.im == 0.0 {
        return Err(CliError::new(EXIT_PRECONDITION, "λ must be off the real axis"));
    }
    let trace = iterate_gamma_hat(&start, lambda, steps)?;
    trace.write_csv(&mut *out)?;
    writeln!(log, "final residual = {:e}", trace.final_residual())?;
    writeln!(log, "max contraction ratio = {}", fmt_num(trace.max_ratio()))?;
    if let Some(bound) = trace.contraction_bound() {
        writeln!(log, "contraction bound 1/|Im λ|² = {}", fmt_num(bound))?;
    }
    Ok(())
}

/// Kac algorithm on a scalar Jacobi matrix. `intervals` defaults to the
/// matrix size.
pub fn cmd_kac(jacobi_json: &str, intervals: Option<usize>, out: &mut dyn Write, log: &mut dyn Write) -> CliResult {
    let j = BlockJacobi::from_json(jacobi_json).map_err(|e| CliError::parse(format!("bad Jacobi file: {e}")))?;
    let m = intervals.unwrap_or(j.len());
    if m == 0 {
        return Err(CliError::parse("--n must be at least 1"));
    }
    let h = kac_from_jacobi(&j, m)?;
    writeln!(out, "{}", h.to_json())?;
    let first = evaluate_h(&h, 0.0)?;
    let ok = h.breakpoints()[1] == 1.0 && (first - nalgebra::Matrix2::new(0.0, 0.0, 0.0, 1.0)).abs().max() < 1e-15;
    writeln!(log, "first interval [0, 1) carries [[0,0],[0,1]]: {}", if ok { "ok" } else { "FAILED" })?;
    if !ok {
        return Err(CliError::new(EXIT_ASSERTION, "first interval check failed"));
    }
    Ok(())
}

/// Weyl-disk estimate of the canonical-system m-function.
pub fn cmd_weyl(hamiltonian_json: &str, lambda: Complex64, tol: f64, out: &mut dyn Write, log: &mut dyn Write) -> CliResult {
    let h = StepHamiltonian::from_json(hamiltonian_json).map_err(|e| CliError::parse(format!("bad Hamiltonian file: {e}")))?;
    let e = m_canonical(&h, lambda, tol)?;
    writeln!(out, "{}", e.to_json())?;
    if !e.converged {
        writeln!(log, "warning: radius {:e} at T = {} did not reach {tol:e}", e.radius, fmt_num(e.truncation_t))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildKind {
    /// Chebyshev first kind Jacobi matrix.
    J0,
    /// Free discrete Schrödinger operator.
    Jhat0,
    /// Seeded random realization with `‖K‖ ≤ 1`.
    RandomNevanlinna,
    /// Seeded random realization by a contraction with isometric `K`.
    RandomInterval,
}

/// Writes one of the model objects as JSON.
pub fn cmd_build(kind: BuildKind, d: usize, n: usize, seed: u64, out: &mut dyn Write) -> CliResult {
    let text = match kind {
        BuildKind::J0 => build_j0(d, n)?.to_json(),
        BuildKind::Jhat0 => build_jhat0(d, n)?.to_json(),
        BuildKind::RandomNevanlinna => random_nevanlinna(seed, d, n)?.to_json(),
        BuildKind::RandomInterval => random_n0_interval(seed, d, n)?.to_json(),
    };
    writeln!(out, "{text}")?;
    Ok(())
}

/// Runs a named check suite, or all of them for `"all"`.
pub fn cmd_verify(suite: &str, out: &mut dyn Write) -> CliResult {
    let reports = if suite == "all" {
        verify::run_all()
    } else {
        match verify::run_suite(suite) {
            Some(r) => vec![r],
            None => {
                writeln!(out, "unknown suite {suite:?}; available suites:\n{}  all", verify::suite_listing())?;
                return Err(CliError::parse(format!("unknown suite {suite:?}")));
            }
        }
    };
    for r in &reports {
        write!(out, "{}", r.render())?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite).collect();
    if !failed.is_empty() {
        return Err(CliError::new(EXIT_ASSERTION, format!("failed: {}", failed.join(", "))));
    }
    Ok(())
}
