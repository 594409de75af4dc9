//! Block Jacobi matrices and their m-functions.
//!
//! A truncation with `N` diagonal blocks `a_k` (Hermitian, `d × d`) and
//! `N − 1` off-diagonal blocks `b_k` is the Hermitian block-tridiagonal matrix
//! with `b_k` above the diagonal and `b_k*` below it. Its m-function is the
//! top-left `d × d` block of `(J − λ)⁻¹`, available through two independent
//! routes: a forward block elimination ([`m_resolvent`]) and the backward
//! J-fraction recursion ([`m_cf`]).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c64, identity, is_hermitian, scaled_identity, set_block, CMatrix};
use crate::specialfn::check_off_cut;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JacobiWire", into = "JacobiWire")]
pub struct BlockJacobi {
    d: usize,
    a: Vec<CMatrix>,
    b: Vec<CMatrix>,
}

impl BlockJacobi {
    pub fn new(a: Vec<CMatrix>, b: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = a.first() else {
            return Err(Error::Invalid("a block Jacobi matrix needs at least one block".into()));
        };
        let d = first.nrows();
        if d == 0 {
            return Err(Error::Dimension("block dimension must be at least 1".into()));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::Dimension(format!("{} diagonal blocks need {} off-diagonal blocks, got {}", a.len(), a.len() - 1, b.len())));
        }
        for (k, ak) in a.iter().enumerate() {
            if ak.shape() != (d, d) || !is_hermitian(ak, 1e-12) {
                return Err(Error::Invalid(format!("a[{k}] is not a Hermitian {d}×{d} block")));
            }
        }
        for (k, bk) in b.iter().enumerate() {
            if bk.shape() != (d, d) {
                return Err(Error::Dimension(format!("b[{k}] is not {d}×{d}")));
            }
            if d == 1 {
                let z = bk[(0, 0)];
                if z.im != 0.0 || !(z.re > 0.0) {
                    return Err(Error::Invalid(format!("scalar b[{k}] = {z} must be real and positive")));
                }
            } else if linalg::singular_values(bk).last().is_none_or(|&s| s <= 1e-14 * linalg::op_norm(bk)) {
                return Err(Error::Invalid(format!("b[{k}] is not invertible")));
            }
        }
        Ok(BlockJacobi { d, a, b })
    }

    /// Scalar Jacobi matrix from real diagonal `a` and positive off-diagonal `b`.
    pub fn scalar(a: &[f64], b: &[f64]) -> Result<Self> {
        let one = |x: f64| CMatrix::from_element(1, 1, c64(x, 0.0));
        BlockJacobi::new(a.iter().map(|&x| one(x)).collect(), b.iter().map(|&x| one(x)).collect())
    }

    pub fn block_dim(&self) -> usize {
        self.d
    }

    /// Number of diagonal blocks `N`.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn diagonal(&self) -> &[CMatrix] {
        &self.a
    }

    pub fn off_diagonal(&self) -> &[CMatrix] {
        &self.b
    }

    /// Scalar coefficient sequences `(a_k, b_k)`; `None` unless `d = 1`.
    pub fn scalar_coefficients(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        (self.d == 1).then(|| {
            (self.a.iter().map(|m| m[(0, 0)].re).collect(), self.b.iter().map(|m| m[(0, 0)].re).collect())
        })
    }

    /// The leading `n`-block truncation.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::Dimension(format!("cannot truncate {} blocks to {n}", self.len())));
        }
        Ok(BlockJacobi { d: self.d, a: self.a[..n].to_vec(), b: self.b[..n - 1].to_vec() })
    }

    /// The assembled `(N·d) × (N·d)` Hermitian matrix.
    pub fn to_dense(&self) -> CMatrix {
        let (d, n) = (self.d, self.len());
        let mut m = CMatrix::zeros(n * d, n * d);
        for (k, ak) in self.a.iter().enumerate() {
            set_block(&mut m, k * d, k * d, ak);
        }
        for (k, bk) in self.b.iter().enumerate() {
            set_block(&mut m, k * d, (k + 1) * d, bk);
            set_block(&mut m, (k + 1) * d, k * d, &bk.adjoint());
        }
        m
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrices always serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct JacobiWire {
    d: usize,
    #[serde(with = "crate::json::matrices")]
    a: Vec<CMatrix>,
    #[serde(with = "crate::json::matrices")]
    b: Vec<CMatrix>,
}

impl TryFrom<JacobiWire> for BlockJacobi {
    type Error = String;

    fn try_from(w: JacobiWire) -> std::result::Result<Self, String> {
        let j = BlockJacobi::new(w.a, w.b).map_err(|e| e.to_string())?;
        if j.d != w.d {
            return Err(format!("declared d = {} but blocks are {}×{}", w.d, j.d, j.d));
        }
        Ok(j)
    }
}

impl From<BlockJacobi> for JacobiWire {
    fn from(j: BlockJacobi) -> Self {
        JacobiWire { d: j.d, a: j.a, b: j.b }
    }
}

fn uniform(d: usize, n: usize, first: f64, rest: f64) -> Result<BlockJacobi> {
    if d == 0 || n < 2 {
        return Err(Error::Dimension(format!("need d ≥ 1 and N ≥ 2, got d = {d}, N = {n}")));
    }
    let a = vec![CMatrix::zeros(d, d); n];
    let b = (0..n - 1)
        .map(|k| scaled_identity(d, c64(if k == 0 { first } else { rest }, 0.0)))
        .collect();
    BlockJacobi::new(a, b)
}

/// `N`-block truncation of the Chebyshev (first kind) matrix:
/// `a_k = 0`, `b_0 = I/√2`, `b_k = I/2`.
pub fn build_j0(d: usize, n: usize) -> Result<BlockJacobi> {
    uniform(d, n, FRAC_1_SQRT_2, 0.5)
}

/// `N`-block truncation of the free discrete Schrödinger operator:
/// `a_k = 0`, `b_k = I`.
pub fn build_jhat0(d: usize, n: usize) -> Result<BlockJacobi> {
    uniform(d, n, 1.0, 1.0)
}

fn pole(lambda: Complex64) -> impl Fn(Error) -> Error {
    move |e| Error::Pole { lambda, detail: e.to_string() }
}

/// Top-left block of `(J − λ)⁻¹` by forward block elimination and back
/// substitution on the first block column. Linear in `N`. The full residual
/// is checked; a relative residual above `1e-8` is reported as a pole.
pub fn m_resolvent(j: &BlockJacobi, lambda: Complex64) -> Result<CMatrix> {
    let (d, n) = (j.d, j.len());
    let shift = scaled_identity(d, lambda);
    let err = pole(lambda);

    // pivots D_k and eliminated right-hand sides Y_k
    let mut pivots: Vec<CMatrix> = Vec::with_capacity(n);
    let mut rhs: Vec<CMatrix> = Vec::with_capacity(n);
    pivots.push(&j.a[0] - &shift);
    rhs.push(identity(d));
    for k in 1..n {
        let prev = &pivots[k - 1];
        // L = b*_{k-1} D_{k-1}^{-1} = (D_{k-1}^{-*} b_{k-1})^*
        let l = linalg::solve(&prev.adjoint(), &j.b[k - 1]).map_err(&err)?.adjoint();
        let dk = &j.a[k] - &shift - &l * &j.b[k - 1];
        let yk = -(&l * &rhs[k - 1]);
        pivots.push(dk);
        rhs.push(yk);
    }

    let mut x = vec![CMatrix::zeros(d, d); n];
    x[n - 1] = linalg::solve(&pivots[n - 1], &rhs[n - 1]).map_err(&err)?;
    for k in (0..n - 1).rev() {
        let r = &rhs[k] - &j.b[k] * &x[k + 1];
        x[k] = linalg::solve(&pivots[k], &r).map_err(&err)?;
    }

    let mut residual = 0.0;
    for k in 0..n {
        let mut r = (&j.a[k] - &shift) * &x[k];
        if k > 0 {
            r += j.b[k - 1].adjoint() * &x[k - 1];
        }
        if k + 1 < n {
            r += &j.b[k] * &x[k + 1];
        }
        if k == 0 {
            r -= identity(d);
        }
        residual += r.norm_squared();
    }
    let residual = residual.sqrt();
    if !(residual <= linalg::SOLVE_RESIDUAL_TOL * (d as f64).sqrt()) {
        return Err(Error::Pole { lambda, detail: format!("block solve residual {residual:e}") });
    }
    Ok(x.swap_remove(0))
}

/// The finite J-fraction `−(λ − a₀ + b₀ m₁ b₀*)⁻¹`, with `m₁` the m-function
/// of the tail, evaluated by backward recursion from the last block.
pub fn m_cf(j: &BlockJacobi, lambda: Complex64) -> Result<CMatrix> {
    let d = j.d;
    let shift = scaled_identity(d, lambda);
    let err = pole(lambda);
    let n = j.len();
    let mut m = -linalg::inverse(&(&shift - &j.a[n - 1])).map_err(&err)?;
    for k in (0..n - 1).rev() {
        let denom = &shift - &j.a[k] + &j.b[k] * &m * j.b[k].adjoint();
        m = -linalg::inverse(&denom).map_err(&err)?;
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebyshevKind {
    /// `(1/π)∫₋₁¹ (t − λ)⁻¹ (1 − t²)^(−1/2) dt`, the fixed point of Γ.
    First,
    /// `(1/2π)∫₋₂² (t − λ)⁻¹ √(4 − t²) dt`, the fixed point of Γ̂.
    Second,
}

/// Gauss–Chebyshev quadrature of the Cauchy transforms of the arcsine and
/// semicircle weights. Independent of the closed forms in `specialfn`.
pub fn quadrature_m0(lambda: Complex64, nodes: usize, kind: ChebyshevKind) -> Result<Complex64> {
    if nodes == 0 {
        return Err(Error::Invalid("quadrature needs at least one node".into()));
    }
    let nf = nodes as f64;
    match kind {
        ChebyshevKind::First => {
            check_off_cut(lambda, 1.0)?;
            let sum: Complex64 = (1..=nodes)
                .map(|k| {
                    let t = ((2 * k - 1) as f64 * PI / (2.0 * nf)).cos();
                    (t - lambda).inv()
                })
                .sum();
            Ok(sum / nf)
        }
        ChebyshevKind::Second => {
            check_off_cut(lambda, 2.0)?;
            let sum: Complex64 = (1..=nodes)
                .map(|k| {
                    let angle = k as f64 * PI / (nf + 1.0);
                    let s = angle.sin();
                    s * s / (2.0 * angle.cos() - lambda)
                })
                .sum();
            Ok(sum * 2.0 / (nf + 1.0))
        }
    }
}
