//! Realizations of transformed functions as compressed resolvents.
//!
//! * [`bold_t`] realizes `M(λ)⁻¹/(λ² − 1)` from a contraction realizing `M`,
//!   using the defect operator `D_T = (I − T²)^{1/2}`.
//! * [`chain_a`] builds the operators `Â_n` whose compressed resolvents are
//!   the Γ̂ iterates `ℳ_{n+1}`.
//! * [`BlockHermitian`] carries the 2×2 block form `[[D, K*], [K, T]]` and
//!   its Schur–Frobenius resolvent.
//!
//! After construction the distinguished subspace `𝔐` always occupies the
//! leading `d` coordinates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herglotz::{RealizedFunction, CONTRACTION_TOL};
use crate::linalg::{
    self, c64, hermitian_eigen, hermitian_part, identity, is_hermitian, max_abs_diff, op_norm,
    scaled_identity, set_block, CMatrix, CVector, RANK_TOL,
};

/// Dense dimension cap for chain operators.
pub const MAX_CHAIN_DIM: usize = 2000;

/// Selfadjoint `T` on `ℂⁿ` together with an orthonormal basis of `𝔐`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealizationWire", into = "RealizationWire")]
pub struct SubspaceRealization {
    t: CMatrix,
    basis: CMatrix,
}

impl SubspaceRealization {
    pub fn new(t: CMatrix, basis: CMatrix) -> Result<Self> {
        let n = t.nrows();
        if n == 0 || !t.is_square() || basis.nrows() != n || basis.ncols() == 0 || basis.ncols() > n {
            return Err(Error::Dimension(format!(
                "T is {}×{}, basis is {}×{}",
                t.nrows(),
                t.ncols(),
                basis.nrows(),
                basis.ncols()
            )));
        }
        if !is_hermitian(&t, 1e-12) {
            return Err(Error::Invalid("T is not Hermitian".into()));
        }
        let gram = basis.adjoint() * &basis;
        if max_abs_diff(&gram, &identity(basis.ncols())) > 1e-12 {
            return Err(Error::Invalid("basis columns are not orthonormal".into()));
        }
        Ok(SubspaceRealization { t: hermitian_part(&t), basis })
    }

    /// `𝔐` spanned by the first `d` coordinate vectors.
    pub fn leading(t: CMatrix, d: usize) -> Result<Self> {
        let n = t.nrows();
        if d == 0 || d > n {
            return Err(Error::Dimension(format!("cannot take {d} leading coordinates of ℂ^{n}")));
        }
        SubspaceRealization::new(t, leading_basis(n, d))
    }

    pub fn operator(&self) -> &CMatrix {
        &self.t
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn space_dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `P_𝔐(T − λ)⁻¹|𝔐`.
    pub fn m_function(&self, lambda: Complex64) -> Result<CMatrix> {
        compressed_resolvent(&self.t, &self.basis, lambda)
    }

    pub fn to_function(&self) -> RealizedFunction {
        RealizedFunction::Realization { t: self.t.clone(), k: self.basis.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrices always serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct RealizationWire {
    #[serde(with = "crate::json::matrix")]
    t: CMatrix,
    #[serde(with = "crate::json::matrix")]
    basis: CMatrix,
}

impl TryFrom<RealizationWire> for SubspaceRealization {
    type Error = String;

    fn try_from(w: RealizationWire) -> std::result::Result<Self, String> {
        SubspaceRealization::new(w.t, w.basis).map_err(|e| e.to_string())
    }
}

impl From<SubspaceRealization> for RealizationWire {
    fn from(r: SubspaceRealization) -> Self {
        RealizationWire { t: r.t, basis: r.basis }
    }
}

fn leading_basis(n: usize, d: usize) -> CMatrix {
    CMatrix::from_fn(n, d, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
}

/// `D_T = (I − T²)^{1/2}` and an orthonormal basis of its range.
#[derive(Debug, Clone)]
pub struct Defect {
    pub operator: CMatrix,
    pub range_basis: CMatrix,
}

pub fn defect_operator(t: &CMatrix) -> Result<Defect> {
    if !t.is_square() || !is_hermitian(t, 1e-12) {
        return Err(Error::Invalid("defect operator needs a Hermitian matrix".into()));
    }
    let n = t.nrows();
    let (values, vectors) = hermitian_eigen(t);
    let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if norm > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction { norm });
    }
    // an eigenvalue within rounding of ±1 would otherwise leave a spurious
    // defect direction of size √ε
    let roots: Vec<f64> = values
        .iter()
        .map(|v| if 1.0 - v.abs() <= CONTRACTION_TOL { 0.0 } else { (1.0 - v * v).sqrt() })
        .collect();
    let diag = CVector::from_iterator(n, roots.iter().map(|&r| c64(r, 0.0)));
    let operator = hermitian_part(&(&vectors * CMatrix::from_diagonal(&diag) * vectors.adjoint()));
    let top = roots.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..n).filter(|&i| top > 0.0 && roots[i] > RANK_TOL * top).collect();
    let mut range_basis = CMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        range_basis.set_column(dst, &vectors.column(src));
    }
    Ok(Defect { operator, range_basis })
}

/// The contraction on `𝔐 ⊕ 𝔇_T` with blocks
/// `[[−P_𝔐T|𝔐, P_𝔐D_T], [D_T|𝔐, T|𝔇_T]]`, whose compressed resolvent on
/// `𝔐` is `(λ² − 1)⁻¹[P_𝔐(T − λ)⁻¹|𝔐]⁻¹`.
pub fn bold_t(r: &SubspaceRealization) -> Result<SubspaceRealization> {
    let defect = defect_operator(&r.t)?;
    let q = &r.basis;
    let rd = &defect.range_basis;
    let (d, k) = (q.ncols(), rd.ncols());
    let mut out = CMatrix::zeros(d + k, d + k);
    set_block(&mut out, 0, 0, &-(q.adjoint() * &r.t * q));
    set_block(&mut out, 0, d, &(q.adjoint() * &defect.operator * rd));
    set_block(&mut out, d, 0, &(rd.adjoint() * &defect.operator * q));
    set_block(&mut out, d, d, &(rd.adjoint() * &r.t * rd));
    SubspaceRealization::leading(hermitian_part(&out), d)
}

/// `basis*(A − λ)⁻¹basis`.
pub fn compressed_resolvent(a: &CMatrix, basis: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    let x = crate::herglotz::resolvent_apply(a, basis, lambda)?;
    Ok(basis.adjoint() * x)
}

/// Hermitian operator in the block form `[[D, K*], [K, T]]` on `𝔐 ⊕ 𝒦`.
#[derive(Debug, Clone)]
pub struct BlockHermitian {
    pub d_block: CMatrix,
    pub k: CMatrix,
    pub t: CMatrix,
}

impl BlockHermitian {
    pub fn new(d_block: CMatrix, k: CMatrix, t: CMatrix) -> Result<Self> {
        let (d, h) = (d_block.nrows(), t.nrows());
        if !d_block.is_square() || !t.is_square() || k.shape() != (h, d) {
            return Err(Error::Dimension("expected D: d×d, K: h×d, T: h×h".into()));
        }
        if !is_hermitian(&d_block, 1e-12) || !is_hermitian(&t, 1e-12) {
            return Err(Error::Invalid("diagonal blocks must be Hermitian".into()));
        }
        Ok(BlockHermitian { d_block, k, t })
    }

    pub fn assemble(&self) -> CMatrix {
        let (d, h) = (self.d_block.nrows(), self.t.nrows());
        let mut a = CMatrix::zeros(d + h, d + h);
        set_block(&mut a, 0, 0, &self.d_block);
        set_block(&mut a, 0, d, &self.k.adjoint());
        set_block(&mut a, d, 0, &self.k);
        set_block(&mut a, d, d, &self.t);
        a
    }

    /// `V(λ) = λ − D + K*(T − λ)⁻¹K`.
    fn v(&self, lambda: Complex64) -> Result<(CMatrix, CMatrix)> {
        let d = self.d_block.nrows();
        let rk = crate::herglotz::resolvent_apply(&self.t, &self.k, lambda)?;
        let v = scaled_identity(d, lambda) - &self.d_block + self.k.adjoint() * &rk;
        Ok((v, rk))
    }

    /// `P_𝔐(A − λ)⁻¹|𝔐 = −V(λ)⁻¹`.
    pub fn schur_compressed_resolvent(&self, lambda: Complex64) -> Result<CMatrix> {
        let (v, _) = self.v(lambda)?;
        let inv = linalg::inverse(&v).map_err(|e| Error::Pole { lambda, detail: e.to_string() })?;
        Ok(-inv)
    }

    /// The four blocks of `(A − λ)⁻¹` in Schur–Frobenius form, row-major.
    pub fn resolvent_blocks(&self, lambda: Complex64) -> Result<[CMatrix; 4]> {
        let h = self.t.nrows();
        let (v, rk) = self.v(lambda)?;
        let v_inv = linalg::inverse(&v).map_err(|e| Error::Pole { lambda, detail: e.to_string() })?;
        let rt = crate::herglotz::resolvent_apply(&self.t, &identity(h), lambda)?;
        let k_star_rt = self.k.adjoint() * &rt;
        let top_left = -&v_inv;
        let top_right = &v_inv * &k_star_rt;
        let bottom_left = &rk * &v_inv;
        let bottom_right = &rt * (identity(h) - &self.k * &v_inv * &k_star_rt);
        Ok([top_left, top_right, bottom_left, bottom_right])
    }
}

/// `Â_n` on `𝔐ⁿ ⊕ ℋ̂` with `𝔐` the first block.
#[derive(Debug, Clone)]
pub struct ChainOperator {
    pub n: usize,
    pub k: CMatrix,
    pub t_hat: CMatrix,
    pub assembled: CMatrix,
}

impl ChainOperator {
    pub fn block_dim(&self) -> usize {
        self.k.ncols()
    }

    pub fn realization(&self) -> SubspaceRealization {
        SubspaceRealization::leading(self.assembled.clone(), self.block_dim())
            .expect("chain operators are Hermitian by construction")
    }

    /// `P_𝔐(Â_n − λ)⁻¹|𝔐`, which equals `ℳ_{n+1}(λ)`.
    pub fn compressed_resolvent(&self, lambda: Complex64) -> Result<CMatrix> {
        compressed_resolvent(&self.assembled, &leading_basis(self.assembled.nrows(), self.block_dim()), lambda)
    }
}

/// Assembles `Â_n`: `n` copies of `𝔐` coupled by identities along the first
/// off-diagonals, the last one attached to `ℋ̂` through `K`, and `T̂` in the
/// corner. `Â₁ = [[0, K*], [K, T̂]]` and `Â_{k+1} = [[0, P*], [P, Â_k]]`.
pub fn chain_a(k: &CMatrix, t_hat: &CMatrix, n: usize) -> Result<ChainOperator> {
    let (h, d) = k.shape();
    if n == 0 {
        return Err(Error::Invalid("chain index starts at 1".into()));
    }
    if d == 0 || !t_hat.is_square() || t_hat.nrows() != h {
        return Err(Error::Dimension(format!("K is {h}×{d} but T̂ is {}×{}", t_hat.nrows(), t_hat.ncols())));
    }
    if !is_hermitian(t_hat, 1e-12) {
        return Err(Error::Invalid("T̂ is not Hermitian".into()));
    }
    let norm = op_norm(k);
    if norm > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction { norm });
    }
    let size = n * d + h;
    if size > MAX_CHAIN_DIM {
        return Err(Error::Dimension(format!("chain dimension {size} exceeds {MAX_CHAIN_DIM}")));
    }
    let mut a = CMatrix::zeros(size, size);
    let eye = identity(d);
    for j in 0..n - 1 {
        set_block(&mut a, j * d, (j + 1) * d, &eye);
        set_block(&mut a, (j + 1) * d, j * d, &eye);
    }
    let last = (n - 1) * d;
    set_block(&mut a, last, n * d, &k.adjoint());
    set_block(&mut a, n * d, last, k);
    set_block(&mut a, n * d, n * d, &hermitian_part(t_hat));
    Ok(ChainOperator { n, k: k.clone(), t_hat: t_hat.clone(), assembled: a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simplicity {
    pub is_simple: bool,
    pub krylov_rank: usize,
}

/// Numerical rank of the block Krylov space `span{Tʲ𝔐}` and whether it fills
/// the whole space.
///
/// The Krylov blocks are orthogonalized as they are generated (block Arnoldi
/// with a second Gram–Schmidt pass), so the rank is read off an orthonormal
/// basis rather than from the badly scaled raw matrix `[Q, TQ, …]`. New
/// directions below `RANK_TOL · max(‖T‖, 1)` are treated as zero.
pub fn simplicity_check(r: &SubspaceRealization) -> Simplicity {
    let n = r.space_dim();
    let scale = op_norm(&r.t).max(1.0);
    let mut basis = linalg::range_basis(&r.basis);
    let mut block = basis.clone();
    while basis.ncols() < n && block.ncols() > 0 {
        let mut w = &r.t * &block;
        for _ in 0..2 {
            let proj = &basis * (basis.adjoint() * &w);
            w -= proj;
        }
        block = new_directions(&w, RANK_TOL * scale);
        if block.ncols() > 0 {
            basis = linalg::hstack(&[&basis, &block]);
        }
    }
    let krylov_rank = basis.ncols().min(n);
    Simplicity { is_simple: krylov_rank == n, krylov_rank }
}

fn new_directions(w: &CMatrix, abs_tol: f64) -> CMatrix {
    let n = w.nrows();
    if w.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let svd = w.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > abs_tol).collect();
    let mut out = CMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &u.column(src));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::build_jhat0;
    use crate::random;
    use crate::transforms::{gamma, gamma_hat, iterate_gamma_hat};

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(vals.len(), vals.iter().map(|&v| c64(v, 0.0))))
    }

    fn random_realization(seed: u64, n: usize, d: usize) -> SubspaceRealization {
        let mut rng = random::rng(seed);
        let t = random::random_hermitian_contraction(&mut rng, n);
        let q = random::random_isometry(&mut rng, n, d);
        SubspaceRealization::new(t, q).unwrap()
    }

    fn off_interval_point(rng: &mut random::TestRng) -> Complex64 {
        use rand::Rng;
        loop {
            let z = c64(rng.random_range(-2.5..2.5), rng.random_range(-2.0..2.0));
            if z.im.abs() > 0.05 || z.re.abs() > 1.1 {
                return z;
            }
        }
    }

    #[test]
    fn defect_examples() {
        let z = defect_operator(&CMatrix::zeros(3, 3)).unwrap();
        assert!(max_abs_diff(&z.operator, &identity(3)) < 1e-15);
        assert_eq!(z.range_basis.ncols(), 3);
        let i = defect_operator(&identity(2)).unwrap();
        assert!(i.operator.norm() < 1e-15);
        assert_eq!(i.range_basis.ncols(), 0);
        let d = defect_operator(&diag(&[0.6, -0.8])).unwrap();
        assert!(max_abs_diff(&d.operator, &diag(&[0.8, 0.6])) < 1e-15);
        assert!(matches!(defect_operator(&diag(&[1.5])), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn bold_t_of_zero() {
        let r = SubspaceRealization::leading(CMatrix::zeros(1, 1), 1).unwrap();
        let b = bold_t(&r).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert!(max_abs_diff(b.operator(), &expect) < 1e-15);
        let lam = c64(0.3, 1.2);
        let m = b.m_function(lam).unwrap()[(0, 0)];
        assert!((m + lam / (lam * lam - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn bold_t_realizes_gamma() {
        let mut rng = random::rng(500);
        for seed in 0..5 {
            let r = random_realization(seed, 12, 3);
            let b = bold_t(&r).unwrap();
            assert!(op_norm(b.operator()) <= 1.0 + 1e-12);
            for _ in 0..20 {
                let lam = off_interval_point(&mut rng);
                let lhs = b.m_function(lam).unwrap();
                let rhs = gamma(&r.m_function(lam).unwrap(), lam).unwrap();
                assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
            }
        }
    }

    #[test]
    fn bold_t_preserves_simplicity() {
        for seed in 0..5 {
            let r = random_realization(seed + 40, 8, 2);
            assert!(simplicity_check(&r).is_simple);
            assert!(simplicity_check(&bold_t(&r).unwrap()).is_simple);
        }
    }

    /// The part of bold T on its defect space has the spectrum of the
    /// compression of T to 𝔐⊥ (eigenvalue multisets only).
    #[test]
    fn defect_part_spectrum_matches_compression() {
        for seed in 0..5 {
            let r = random_realization(seed + 60, 9, 2);
            let b = bold_t(&r).unwrap();
            let db = defect_operator(b.operator()).unwrap();
            let restricted = db.range_basis.adjoint() * b.operator() * &db.range_basis;
            let (mut lhs, _) = hermitian_eigen(&restricted);
            let comp = linalg::orthogonal_complement(r.basis());
            let (mut rhs, _) = hermitian_eigen(&(comp.adjoint() * r.operator() * &comp));
            lhs.sort_by(f64::total_cmp);
            rhs.sort_by(f64::total_cmp);
            assert_eq!(lhs.len(), rhs.len());
            for (x, y) in lhs.iter().zip(&rhs) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn compressed_resolvent_diagonal() {
        let a = diag(&[1.0, -1.0]);
        let e1 = leading_basis(2, 1);
        let lam = c64(0.0, 2.0);
        let m = compressed_resolvent(&a, &e1, lam).unwrap()[(0, 0)];
        assert!((m - c64(1.0, 2.0) / 5.0).norm() < 1e-15);
        assert!(matches!(compressed_resolvent(&a, &e1, c64(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn schur_forms_agree_with_direct_inverse() {
        let mut rng = random::rng(600);
        for seed in 0..50u64 {
            let mut r = random::rng(seed + 1000);
            let (d, h) = (1 + (seed as usize % 3), 5);
            let dd = random::random_hermitian(&mut r, d, -1.0, 1.0);
            let k = random::gaussian_matrix(&mut r, h, d);
            let t = random::random_hermitian(&mut r, h, -2.0, 2.0);
            let op = BlockHermitian::new(dd, k, t).unwrap();
            let a = op.assemble();
            let lam = random::random_point(&mut rng, 2.0, 0.1, 2.0);
            let direct = linalg::inverse(&(&a - scaled_identity(d + h, lam))).unwrap();
            let schur = op.schur_compressed_resolvent(lam).unwrap();
            assert!(max_abs_diff(&schur, &linalg::block(&direct, 0, 0, d, d)) < 1e-11);
            let [tl, tr, bl, br] = op.resolvent_blocks(lam).unwrap();
            let scale = 1.0 + direct.norm();
            assert!(max_abs_diff(&tl, &linalg::block(&direct, 0, 0, d, d)) < 1e-11 * scale);
            assert!(max_abs_diff(&tr, &linalg::block(&direct, 0, d, d, h)) < 1e-11 * scale);
            assert!(max_abs_diff(&bl, &linalg::block(&direct, d, 0, h, d)) < 1e-11 * scale);
            assert!(max_abs_diff(&br, &linalg::block(&direct, d, d, h, h)) < 1e-11 * scale);
        }
    }

    #[test]
    fn smallest_chain() {
        let one = CMatrix::from_element(1, 1, c64(1.0, 0.0));
        let c = chain_a(&one, &CMatrix::zeros(1, 1), 1).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(c.assembled, expect);
        assert!(chain_a(&one, &CMatrix::zeros(1, 1), 0).is_err());
        assert!(chain_a(&(one.clone() * c64(2.0, 0.0)), &CMatrix::zeros(1, 1), 1).is_err());
        assert!(chain_a(&one, &CMatrix::zeros(2, 2), 1).is_err());
    }

    /// Literal recursion `Â_{k+1} = [[0, P*], [P, Â_k]]`.
    fn chain_by_recursion(k: &CMatrix, t_hat: &CMatrix, n: usize) -> CMatrix {
        let d = k.ncols();
        let mut a = BlockHermitian::new(CMatrix::zeros(d, d), k.clone(), t_hat.clone()).unwrap().assemble();
        for _ in 1..n {
            let p = leading_basis(a.nrows(), d);
            a = BlockHermitian::new(CMatrix::zeros(d, d), p, a).unwrap().assemble();
        }
        a
    }

    #[test]
    fn chain_pattern_and_realization() {
        let mut rng = random::rng(700);
        for seed in 0..5 {
            let mut r = random::rng(seed + 70);
            let (d, h) = (2, 4);
            let k = random::random_with_norm(&mut r, h, d, 0.9);
            let t_hat = random::random_hermitian(&mut r, h, -1.5, 1.5);
            let start = RealizedFunction::realization(t_hat.clone(), k.clone()).unwrap();
            for n in 1..=6 {
                let c = chain_a(&k, &t_hat, n).unwrap();
                assert_eq!(c.assembled, chain_by_recursion(&k, &t_hat, n));
                let corner = linalg::block(&c.assembled, 0, 0, n * d, n * d);
                assert_eq!(corner, build_jhat0(d, n.max(2)).unwrap().truncate(n).unwrap().to_dense());
                for _ in 0..5 {
                    let lam = random::random_point(&mut rng, 2.0, 0.1, 2.0);
                    let trace = iterate_gamma_hat(&start, lam, n).unwrap();
                    let cr = c.compressed_resolvent(lam).unwrap();
                    assert!(max_abs_diff(&cr, &trace.values[n - 1]) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn chain_telescopes() {
        let mut r = random::rng(71);
        let k = random::random_with_norm(&mut r, 3, 1, 1.0);
        let t_hat = random::random_hermitian(&mut r, 3, -1.0, 1.0);
        let lam = c64(0.4, 0.7);
        for n in 1..8 {
            let lo = chain_a(&k, &t_hat, n).unwrap().compressed_resolvent(lam).unwrap();
            let hi = chain_a(&k, &t_hat, n + 1).unwrap().compressed_resolvent(lam).unwrap();
            assert!(max_abs_diff(&hi, &gamma_hat(&lo, lam).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn simplicity_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = CMatrix::from_column_slice(2, 1, &[c64(s, 0.0), c64(s, 0.0)]);
        let r = SubspaceRealization::new(diag(&[1.0, 2.0]), q).unwrap();
        assert_eq!(simplicity_check(&r), Simplicity { is_simple: true, krylov_rank: 2 });
        let r = SubspaceRealization::leading(diag(&[1.0, 1.0]), 1).unwrap();
        assert_eq!(simplicity_check(&r), Simplicity { is_simple: false, krylov_rank: 1 });
        // Jacobi matrices are simple with respect to their first block
        let j = build_jhat0(2, 30).unwrap().to_dense();
        assert!(simplicity_check(&SubspaceRealization::leading(j, 2).unwrap()).is_simple);
    }

    /// Â₁ is 𝔐-minimal exactly when T̂ is simple with respect to ran K.
    #[test]
    fn first_chain_minimal_iff_range_simple() {
        let mut r = random::rng(80);
        // generic data: both simple
        let k = random::random_with_norm(&mut r, 4, 1, 0.8);
        let t_hat = random::random_hermitian(&mut r, 4, -1.0, 1.0);
        let ran_k = SubspaceRealization::new(t_hat.clone(), linalg::range_basis(&k)).unwrap();
        let a1 = chain_a(&k, &t_hat, 1).unwrap().realization();
        assert!(simplicity_check(&ran_k).is_simple);
        assert!(simplicity_check(&a1).is_simple);
        // K supported on an invariant subspace of T̂: neither is simple
        let t_hat = diag(&[0.5, -0.3, 0.2, 0.9]);
        let k = CMatrix::from_column_slice(4, 1, &[c64(0.6, 0.0), c64(0.0, 0.0), c64(0.8, 0.0), c64(0.0, 0.0)]);
        let ran_k = SubspaceRealization::new(t_hat.clone(), linalg::range_basis(&k)).unwrap();
        let a1 = chain_a(&k, &t_hat, 1).unwrap().realization();
        let s1 = simplicity_check(&ran_k);
        let s2 = simplicity_check(&a1);
        assert!(!s1.is_simple && !s2.is_simple);
        assert_eq!(s1.krylov_rank, 2);
        assert_eq!(s2.krylov_rank, 3);
    }

    #[test]
    fn json_round_trip() {
        let r = random_realization(3, 4, 2);
        assert_eq!(SubspaceRealization::from_json(&r.to_json()).unwrap(), r);
        assert!(SubspaceRealization::from_json(r#"{"t":[[[0,0]]],"basis":[[[2,0]]]}"#).is_err());
    }
}
