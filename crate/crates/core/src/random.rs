//! Seeded random test inputs: unitary matrices, Hermitian matrices with a
//! prescribed spectral range, contractions and isometries.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, hermitian_part, op_norm, CMatrix};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-like unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    // fix the phases so the distribution does not depend on the QR convention
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// `U diag(t) U*` with eigenvalues drawn uniformly from `[lo, hi]`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> CMatrix {
    let u = random_unitary(rng, n);
    let spectrum = DVector::from_fn(n, |_, _| c64(rng.random_range(lo..=hi), 0.0));
    hermitian_part(&(&u * CMatrix::from_diagonal(&spectrum) * u.adjoint()))
}

/// Hermitian contraction with spectrum in `[-1, 1]`.
pub fn random_hermitian_contraction<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    random_hermitian(rng, n, -1.0, 1.0)
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn random_isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    random_unitary(rng, rows).columns(0, cols).into_owned()
}

/// Gaussian matrix rescaled to operator norm `target`.
pub fn random_with_norm<R: Rng>(rng: &mut R, rows: usize, cols: usize, target: f64) -> CMatrix {
    let g = gaussian_matrix(rng, rows, cols);
    let n = op_norm(&g);
    if n == 0.0 {
        return g;
    }
    g.scale(target / n)
}

/// A point with `im` drawn from `[im_lo, im_hi]` and `re` from `[-re_span, re_span]`.
pub fn random_point<R: Rng>(rng: &mut R, re_span: f64, im_lo: f64, im_hi: f64) -> num_complex::Complex64 {
    c64(rng.random_range(-re_span..=re_span), rng.random_range(im_lo..=im_hi))
}
