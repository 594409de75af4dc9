//! Dense complex linear-algebra helpers on top of `nalgebra`.
//!
//! Everything in this crate works with small dense matrices (block dimension
//! `d` of a few units, realization spaces of at most a few thousand), so the
//! helpers favour exactness over speed: operator norms come from a full SVD
//! and Hermitian spectra from a full eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative floor below which singular values count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Relative residual above which a linear solve is reported as near-singular.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-8;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn scaled_identity(n: usize, s: Complex64) -> CMatrix {
    CMatrix::from_diagonal_element(n, n, s)
}

/// Converts a real matrix into a complex one.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| c64(x, 0.0))
}

/// Singular values sorted in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Ratio of the extreme singular values; infinite for a singular matrix.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol * (1.0 + m.norm())
}

/// Hermitian part `(m + m*)/2`, used to scrub rounding asymmetry.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in ascending order.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// PSD test with the scale-relative floor `-1e-10 (1 + ‖G‖)`.
pub fn is_psd(g: &CMatrix) -> bool {
    min_eigenvalue(g) >= -1e-10 * (1.0 + op_norm(g))
}

/// Solves `a x = rhs` by LU and rejects results whose residual exceeds
/// `SOLVE_RESIDUAL_TOL · ‖rhs‖`.
pub fn solve(a: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.nrows() != rhs.nrows() {
        return Err(Error::Dimension(format!(
            "solve: {}x{} system with {} rhs rows",
            a.nrows(),
            a.ncols(),
            rhs.nrows()
        )));
    }
    let x = a
        .clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::Singular("LU factorization broke down".into()))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular("non-finite solution".into()));
    }
    let residual = (a * &x - rhs).norm();
    if residual > SOLVE_RESIDUAL_TOL * rhs.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Singular(format!("relative residual {:e}", residual / rhs.norm())));
    }
    Ok(x)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &identity(a.nrows()))
}

/// Orthonormal basis of the column range, dropping directions whose singular
/// value is below `RANK_TOL` relative to the largest.
pub fn range_basis(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return CMatrix::zeros(n, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let s = &svd.singular_values;
    let top = s.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| top > 0.0 && s[i] > RANK_TOL * top).collect();
    let mut out = CMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &u.column(src));
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of `basis`.
pub fn orthogonal_complement(basis: &CMatrix) -> CMatrix {
    let n = basis.nrows();
    let projector = identity(n) - basis * basis.adjoint();
    let (values, vectors) = hermitian_eigen(&projector);
    let keep: Vec<usize> = (0..n).filter(|&i| values[i] > 0.5).collect();
    let mut out = CMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &vectors.column(src));
    }
    out
}

/// Writes `block` into `target` with its top-left corner at `(row, col)`.
pub fn set_block(target: &mut CMatrix, row: usize, col: usize, block: &CMatrix) {
    target
        .view_mut((row, col), (block.nrows(), block.ncols()))
        .copy_from(block);
}

pub fn block(m: &CMatrix, row: usize, col: usize, nrows: usize, ncols: usize) -> CMatrix {
    m.view((row, col), (nrows, ncols)).into_owned()
}

/// Horizontal concatenation of equally tall matrices.
pub fn hstack(parts: &[&CMatrix]) -> CMatrix {
    let rows = parts.first().map_or(0, |p| p.nrows());
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        set_block(&mut out, 0, at, p);
        at += p.ncols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(0.5, 0.0), c64(0.0, -2.0)]));
        assert!((op_norm(&m) - 2.0).abs() < 1e-14);
        assert!((condition_number(&m) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_sorted_ascending() {
        let m = CMatrix::from_row_slice(2, 2, &[c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-13 && (vals[1] - 3.0).abs() < 1e-13);
        let recon = &vecs * CMatrix::from_diagonal(&CVector::from_iterator(2, vals.iter().map(|&v| c64(v, 0.0)))) * vecs.adjoint();
        assert!(max_abs_diff(&recon, &m) < 1e-13);
    }

    #[test]
    fn singular_solve_rejected() {
        let a = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(2.0, 0.0), c64(2.0, 0.0), c64(4.0, 0.0)]);
        assert!(solve(&a, &identity(2)).is_err());
    }

    #[test]
    fn complement_spans_the_rest() {
        let q = CMatrix::from_column_slice(3, 1, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let c = orthogonal_complement(&q);
        assert_eq!(c.ncols(), 2);
        assert!((q.adjoint() * &c).norm() < 1e-14);
        assert!(max_abs_diff(&(c.adjoint() * &c), &identity(2)) < 1e-14);
    }

    #[test]
    fn rank_drops_tiny_directions() {
        let m = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1e-13, 0.0)]);
        assert_eq!(numerical_rank(&m, RANK_TOL), 1);
        assert_eq!(range_basis(&m).ncols(), 1);
    }
}
