//! Matrix-valued Nevanlinna functions given by finite data.
//!
//! Two representations are supported:
//!
//! * **measure**: `M(λ) = A + Bλ + Σⱼ Wⱼ((tⱼ − λ)⁻¹ − tⱼ/(tⱼ² + 1))` with a
//!   Hermitian `A`, PSD `B` and finitely many PSD point masses `Wⱼ`;
//! * **realization**: `M(λ) = K*(T − λ)⁻¹K` with Hermitian `T` (`n × n`) and a
//!   contraction `K` (`n × d`).
//!
//! Besides evaluation the module provides the two kernel tests used to probe
//! class membership on finite samples: the Nevanlinna kernel
//! `(M(λ) − M(μ)*)/(λ − μ̄)` and the kernel characterizing m-functions of
//! selfadjoint contractions,
//! `[(1 − λ²)M(λ) − (1 − ξ̄²)M(ξ)* − (λ − ξ̄)I]/(λ − ξ̄)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, c64, hermitian_eigen, is_hermitian, min_eigenvalue, op_norm, scaled_identity, CMatrix,
    CVector,
};
use crate::random;

/// Tolerance on `‖K‖ ≤ 1` in realizations.
pub const CONTRACTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    #[serde(rename = "w", with = "crate::json::matrix")]
    pub weight: CMatrix,
}

/// A matrix-valued Nevanlinna function in one of its finite representations.
///
/// The variants are public so that invalid data can be built on purpose (for
/// negative tests); the checked constructors are [`RealizedFunction::measure`]
/// and [`RealizedFunction::realization`].
#[derive(Debug, Clone, PartialEq)]
pub enum RealizedFunction {
    Measure { a: CMatrix, b: CMatrix, atoms: Vec<Atom> },
    Realization { t: CMatrix, k: CMatrix },
}

fn psd_within(m: &CMatrix, tol: f64) -> bool {
    min_eigenvalue(m) >= -tol * (1.0 + op_norm(m))
}

impl RealizedFunction {
    pub fn measure(a: CMatrix, b: CMatrix, atoms: Vec<Atom>) -> Result<Self> {
        let f = RealizedFunction::Measure { a, b, atoms };
        f.validate()?;
        Ok(f)
    }

    pub fn realization(t: CMatrix, k: CMatrix) -> Result<Self> {
        let f = RealizedFunction::Realization { t, k };
        f.validate()?;
        Ok(f)
    }

    /// The identically vanishing function on `ℂ^d`.
    pub fn zero(d: usize) -> Self {
        RealizedFunction::Measure { a: CMatrix::zeros(d, d), b: CMatrix::zeros(d, d), atoms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        match self {
            RealizedFunction::Measure { a, .. } => a.nrows(),
            RealizedFunction::Realization { k, .. } => k.ncols(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RealizedFunction::Measure { a, b, atoms } => {
                let d = a.nrows();
                if d == 0 || !a.is_square() || b.shape() != (d, d) {
                    return Err(Error::Dimension("A and B must be d×d with d ≥ 1".into()));
                }
                if !is_hermitian(a, 1e-12) {
                    return Err(Error::Invalid("A is not Hermitian".into()));
                }
                if !is_hermitian(b, 1e-12) || !psd_within(b, 1e-12) {
                    return Err(Error::Invalid("B is not positive semidefinite".into()));
                }
                for (j, atom) in atoms.iter().enumerate() {
                    if atom.weight.shape() != (d, d) {
                        return Err(Error::Dimension(format!("atom {j} weight is not {d}×{d}")));
                    }
                    if !atom.t.is_finite() {
                        return Err(Error::Invalid(format!("atom {j} has a non-finite location")));
                    }
                    if !is_hermitian(&atom.weight, 1e-12) || !psd_within(&atom.weight, 1e-12) {
                        return Err(Error::Invalid(format!("atom {j} weight is not PSD")));
                    }
                    if atoms[..j].iter().any(|other| other.t == atom.t) {
                        return Err(Error::Invalid(format!("duplicate atom location {}", atom.t)));
                    }
                }
                Ok(())
            }
            RealizedFunction::Realization { t, k } => {
                let n = t.nrows();
                if n == 0 || !t.is_square() || k.nrows() != n || k.ncols() == 0 {
                    return Err(Error::Dimension("T must be n×n and K n×d".into()));
                }
                if !is_hermitian(t, 1e-12) {
                    return Err(Error::Invalid("T is not Hermitian".into()));
                }
                let norm = op_norm(k);
                if norm > 1.0 + CONTRACTION_TOL {
                    return Err(Error::NotContraction { norm });
                }
                Ok(())
            }
        }
    }

    pub fn evaluate(&self, lambda: Complex64) -> Result<CMatrix> {
        match self {
            RealizedFunction::Measure { a, b, atoms } => {
                let mut m = a + b * lambda;
                for atom in atoms {
                    let gap = atom.t - lambda;
                    if gap.norm() <= 1e-14 * (1.0 + atom.t.abs()) {
                        return Err(Error::Pole { lambda, detail: format!("atom at {}", atom.t) });
                    }
                    let coeff = gap.inv() - atom.t / (atom.t * atom.t + 1.0);
                    m += &atom.weight * coeff;
                }
                Ok(m)
            }
            RealizedFunction::Realization { t, k } => {
                let x = resolvent_apply(t, k, lambda)?;
                Ok(k.adjoint() * x)
            }
        }
    }

    /// `M'(λ)`, computed from the finite data (sum of squared resolvents).
    pub fn derivative(&self, lambda: Complex64) -> Result<CMatrix> {
        match self {
            RealizedFunction::Measure { b, atoms, .. } => {
                let mut m = b.clone();
                for atom in atoms {
                    let gap = atom.t - lambda;
                    if gap.norm() <= 1e-14 * (1.0 + atom.t.abs()) {
                        return Err(Error::Pole { lambda, detail: format!("atom at {}", atom.t) });
                    }
                    m += &atom.weight * (gap * gap).inv();
                }
                Ok(m)
            }
            RealizedFunction::Realization { t, k } => {
                let x = resolvent_apply(t, k, lambda)?;
                let y = resolvent_apply(t, &x, lambda)?;
                Ok(k.adjoint() * y)
            }
        }
    }

    /// `C = −lim_{y→∞} iy·M(iy)`, the coefficient of `−1/λ` at infinity.
    ///
    /// For the realization variant this is exactly `K*K`; for the measure
    /// variant it is the total mass `Σ Wⱼ`, and a nonzero `B` is reported as
    /// [`Error::Unbounded`].
    pub fn asymptotic_c(&self) -> Result<CMatrix> {
        match self {
            RealizedFunction::Measure { a, b, atoms } => {
                if b.iter().any(|z| z.norm() > 0.0) {
                    return Err(Error::Unbounded);
                }
                let d = a.nrows();
                Ok(atoms.iter().fold(CMatrix::zeros(d, d), |acc, atom| acc + &atom.weight))
            }
            RealizedFunction::Realization { k, .. } => Ok(k.adjoint() * k),
        }
    }

    /// Rewrites a realization as a finite measure: atoms at the eigenvalues of
    /// `T` with weights `K*PⱼK`. Eigenvalues closer than `1e-12` are merged.
    /// A measure is returned unchanged.
    pub fn to_measure(&self) -> RealizedFunction {
        let RealizedFunction::Realization { t, k } = self else {
            return self.clone();
        };
        let d = k.ncols();
        let (values, vectors) = hermitian_eigen(t);
        let mut atoms: Vec<Atom> = Vec::new();
        for (i, &tv) in values.iter().enumerate() {
            let v = vectors.column(i);
            let kv = k.adjoint() * v;
            let w = &kv * kv.adjoint();
            match atoms.last_mut() {
                Some(last) if (last.t - tv).abs() <= 1e-12 * (1.0 + tv.abs()) => last.weight += w,
                _ => atoms.push(Atom { t: tv, weight: w }),
            }
        }
        let a = atoms.iter().fold(CMatrix::zeros(d, d), |acc, atom| {
            acc + &atom.weight * c64(atom.t / (atom.t * atom.t + 1.0), 0.0)
        });
        RealizedFunction::Measure { a: linalg::hermitian_part(&a), b: CMatrix::zeros(d, d), atoms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Wire::from(self)).expect("matrices always serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let f = RealizedFunction::from_json_unchecked(text)?;
        f.validate().map_err(|e| e.to_string())?;
        Ok(f)
    }

    /// Parses without [`RealizedFunction::validate`]; only the declared
    /// dimension is checked against the data.
    pub fn from_json_unchecked(text: &str) -> std::result::Result<Self, String> {
        let wire: Wire = serde_json::from_str(text).map_err(|e| e.to_string())?;
        RealizedFunction::try_from(wire)
    }
}

/// `(T − λ)⁻¹ X`, with near-singular shifts reported as poles.
pub(crate) fn resolvent_apply(t: &CMatrix, x: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    let shifted = t - scaled_identity(t.nrows(), lambda);
    linalg::solve(&shifted, x).map_err(|e| Error::Pole { lambda, detail: e.to_string() })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
enum Wire {
    Measure {
        dim: usize,
        #[serde(with = "crate::json::matrix")]
        a: CMatrix,
        #[serde(with = "crate::json::matrix")]
        b: CMatrix,
        atoms: Vec<Atom>,
    },
    Realization {
        dim: usize,
        #[serde(with = "crate::json::matrix")]
        t: CMatrix,
        #[serde(with = "crate::json::matrix")]
        k: CMatrix,
    },
}

impl From<&RealizedFunction> for Wire {
    fn from(f: &RealizedFunction) -> Self {
        match f.clone() {
            RealizedFunction::Measure { a, b, atoms } => Wire::Measure { dim: a.nrows(), a, b, atoms },
            RealizedFunction::Realization { t, k } => Wire::Realization { dim: k.ncols(), t, k },
        }
    }
}

impl TryFrom<Wire> for RealizedFunction {
    type Error = String;

    fn try_from(w: Wire) -> std::result::Result<Self, String> {
        let (dim, f) = match w {
            Wire::Measure { dim, a, b, atoms } => (dim, RealizedFunction::Measure { a, b, atoms }),
            Wire::Realization { dim, t, k } => (dim, RealizedFunction::Realization { t, k }),
        };
        if f.dim() != dim {
            return Err(format!("declared dim {dim} does not match matrix data ({})", f.dim()));
        }
        Ok(f)
    }
}

/// Finite sample for the kernel tests.
#[derive(Debug, Clone)]
pub struct SampleSet {
    points: Vec<Complex64>,
    vectors: Option<Vec<CVector>>,
}

impl SampleSet {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("sample set is empty".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.re.is_finite() || !p.im.is_finite() || p.im == 0.0 {
                return Err(Error::Invalid(format!("sample point {p} is real or non-finite")));
            }
            if points[..i].contains(p) {
                return Err(Error::Invalid(format!("sample point {p} repeated")));
            }
        }
        Ok(SampleSet { points, vectors: None })
    }

    /// Attaches one test vector per point.
    pub fn with_vectors(mut self, vectors: Vec<CVector>) -> Result<Self> {
        if vectors.len() != self.points.len() {
            return Err(Error::Dimension(format!(
                "{} vectors for {} points",
                vectors.len(),
                self.points.len()
            )));
        }
        self.vectors = Some(vectors);
        Ok(self)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn vectors(&self) -> Option<&[CVector]> {
        self.vectors.as_deref()
    }
}

/// Assembles `G` from a d×d kernel: `G_{kl} = f_k* K(λ_k, λ_l) f_l` when test
/// vectors are present, otherwise the full `(nd) × (nd)` block matrix.
fn assemble_gram<F>(d: usize, samples: &SampleSet, mut kernel: F) -> Result<CMatrix>
where
    F: FnMut(usize, usize) -> Result<CMatrix>,
{
    let n = samples.points.len();
    match &samples.vectors {
        Some(vs) => {
            if vs.iter().any(|v| v.len() != d) {
                return Err(Error::Dimension(format!("test vectors must have length {d}")));
            }
            let mut g = CMatrix::zeros(n, n);
            for k in 0..n {
                for l in 0..n {
                    let kl = kernel(k, l)?;
                    g[(k, l)] = (vs[k].adjoint() * kl * &vs[l])[(0, 0)];
                }
            }
            Ok(g)
        }
        None => {
            let mut g = CMatrix::zeros(n * d, n * d);
            for k in 0..n {
                for l in 0..n {
                    linalg::set_block(&mut g, k * d, l * d, &kernel(k, l)?);
                }
            }
            Ok(g)
        }
    }
}

/// Gram matrix of the Nevanlinna kernel `(M(λ) − M(μ)*)/(λ − μ̄)`.
///
/// When `λ_k = conj(λ_l)` the kernel is replaced by its limit `M'(λ_k)`.
pub fn nevanlinna_gram(f: &RealizedFunction, samples: &SampleSet) -> Result<CMatrix> {
    let values: Vec<CMatrix> = samples.points.iter().map(|&p| f.evaluate(p)).collect::<Result<_>>()?;
    let pts = &samples.points;
    assemble_gram(f.dim(), samples, |k, l| {
        let denom = pts[k] - pts[l].conj();
        if denom.norm() <= 1e-12 * (1.0 + pts[k].norm()) {
            f.derivative(pts[k])
        } else {
            Ok((&values[k] - values[l].adjoint()) / denom)
        }
    })
}

/// Gram matrix of `[(1 − λ²)M(λ) − (1 − ξ̄²)M(ξ)* − (λ − ξ̄)I]/(λ − ξ̄)`.
///
/// There is no diagonal limit for this kernel; a pair with `λ = ξ̄` is an
/// error.
pub fn class_n0_interval_gram(f: &RealizedFunction, samples: &SampleSet) -> Result<CMatrix> {
    let d = f.dim();
    for &p in &samples.points {
        crate::specialfn::check_off_cut(p, 1.0)?;
    }
    let values: Vec<CMatrix> = samples.points.iter().map(|&p| f.evaluate(p)).collect::<Result<_>>()?;
    let pts = &samples.points;
    assemble_gram(d, samples, |k, l| {
        let (lam, xi_bar) = (pts[k], pts[l].conj());
        let denom = lam - xi_bar;
        if denom.norm() <= 1e-12 * (1.0 + lam.norm()) {
            return Err(Error::Invalid(format!("sample pair with λ = conj(ξ) = {lam}")));
        }
        let num = &values[k] * (1.0 - lam * lam) - values[l].adjoint() * (1.0 - xi_bar * xi_bar)
            - scaled_identity(d, denom);
        Ok(num / denom)
    })
}

/// Random realization `K*(T − λ)⁻¹K` with spectrum of `T` in `[−2, 2]` and
/// `‖K‖` drawn from `[0.5, 1]`. Deterministic in `seed`.
pub fn random_nevanlinna(seed: u64, d: usize, n: usize) -> Result<RealizedFunction> {
    use rand::Rng;
    if d == 0 || n < d {
        return Err(Error::Dimension(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}")));
    }
    let mut rng = random::rng(seed);
    let t = random::random_hermitian(&mut rng, n, -2.0, 2.0);
    let norm = rng.random_range(0.5..=1.0);
    let k = random::random_with_norm(&mut rng, n, d, norm);
    RealizedFunction::realization(t, k)
}

/// Random member of the class realized by selfadjoint contractions: `T` has
/// spectrum in `[−1, 1]` and `K` has orthonormal columns, so
/// `−iy·M(iy) → I`. Deterministic in `seed`.
pub fn random_n0_interval(seed: u64, d: usize, n: usize) -> Result<RealizedFunction> {
    if d == 0 || n < d {
        return Err(Error::Dimension(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}")));
    }
    let mut rng = random::rng(seed);
    let t = random::random_hermitian_contraction(&mut rng, n);
    let k = random::random_isometry(&mut rng, n, d);
    RealizedFunction::realization(t, k)
}
