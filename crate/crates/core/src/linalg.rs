//! Dense decompositions, computed with `faer` on `nalgebra` matrices.
//!
//! `nalgebra`'s complex SVD can lose accuracy badly on rank-deficient
//! inputs, so every factorisation the crate relies on goes through here.

use faer::{Mat, Side};
use nalgebra::{DVector, SymmetricEigen};

use crate::hilbert::{CMatrix, C64};

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin singular value decomposition `M = U diag(s) Vᴴ`, with `s`
/// non-increasing.
pub(crate) struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub(crate) fn svd(m: &CMatrix) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        let k = r.min(c);
        return Svd { u: CMatrix::zeros(r, k), s: Vec::new(), v: CMatrix::zeros(c, k) };
    }
    let dec = to_faer(m).thin_svd().expect("SVD of a finite matrix converges");
    let s = dec.S().column_vector().iter().map(|z| z.re).collect();
    Svd { u: from_faer(dec.U()), s, v: from_faer(dec.V()) }
}

pub(crate) fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd(m).s
}

/// Eigen-decomposition of a Hermitian matrix, symmetrising first.
/// Eigenvalues are ascending.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> SymmetricEigen<C64, nalgebra::Dyn> {
    let n = m.nrows();
    if n == 0 {
        return SymmetricEigen { eigenvectors: CMatrix::zeros(0, 0), eigenvalues: DVector::zeros(0) };
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let dec = to_faer(&sym)
        .self_adjoint_eigen(Side::Lower)
        .expect("eigen-decomposition of a finite matrix converges");
    let eigenvalues = DVector::from_iterator(n, dec.S().column_vector().iter().map(|z| z.re));
    SymmetricEigen { eigenvectors: from_faer(dec.U()), eigenvalues }
}
