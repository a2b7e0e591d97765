//! Subspaces of `C^n` as an implicit orthomodular lattice.
//!
//! A [`Subspace`] is stored as an orthonormal frame (one column per basis
//! vector; the zero subspace has no columns). Rank decisions are made
//! relative to the largest singular value or eigenvalue involved, scaled by
//! the subspace tolerance. Two subspaces are equal when their orthogonal
//! projectors differ by at most the tolerance in Frobenius norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative rank tolerance and subspace equality threshold used throughout.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("bad shape: expected {expected} rows, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Sasaki cross-check failed: formula and projector image differ by {0:e}")]
    CrossCheckFailed(f64),
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `n x n` identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Standard basis vector `e_i` of `C^n` (zero based).
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Largest entry of `|m - mᴴ|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) use crate::linalg::hermitian_eigen;

#[derive(Debug, Clone)]
pub struct Subspace {
    frame: CMatrix,
    tol: f64,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Self { frame: CMatrix::zeros(dim, 0), tol: DEFAULT_TOL }
    }

    pub fn full(dim: usize) -> Self {
        Self { frame: identity(dim), tol: DEFAULT_TOL }
    }

    /// Column span of `vectors`, with rank decided by singular values above
    /// `tol` times the largest one.
    pub fn span(vectors: &CMatrix, tol: f64) -> Result<Self, HilbertError> {
        Self::span_with_scale(vectors, tol, None)
    }

    /// Column span keeping singular values above `tol * scale`. Use this
    /// when the vectors are images of unit vectors under a map of norm
    /// `scale`, so that vectors annihilated up to rounding are dropped.
    /// `None` means relative to the largest singular value.
    pub fn span_with_scale(vectors: &CMatrix, tol: f64, scale: Option<f64>) -> Result<Self, HilbertError> {
        if !is_finite(vectors) {
            return Err(HilbertError::NonFinite);
        }
        let n = vectors.nrows();
        if vectors.ncols() == 0 || vectors.iter().all(|z| *z == C64::default()) {
            return Ok(Self { frame: CMatrix::zeros(n, 0), tol });
        }
        let svd = crate::linalg::svd(vectors);
        let u = &svd.u;
        let scale = scale.unwrap_or(svd.s[0]);
        let keep: Vec<usize> = svd
            .s
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > tol * scale)
            .map(|(i, _)| i)
            .collect();
        Ok(Self { frame: u.select_columns(&keep), tol })
    }

    /// Span of a list of vectors of dimension `dim`.
    pub fn span_of(dim: usize, vectors: &[CVector], tol: f64) -> Result<Self, HilbertError> {
        for v in vectors {
            if v.len() != dim {
                return Err(HilbertError::BadShape { expected: dim, got: v.len() });
            }
        }
        let m = if vectors.is_empty() {
            CMatrix::zeros(dim, 0)
        } else {
            CMatrix::from_columns(vectors)
        };
        Self::span(&m, tol)
    }

    /// The ray through `v`; the zero subspace if `v` vanishes.
    pub fn ray(v: &CVector) -> Self {
        Self::span(&CMatrix::from_columns(&[v.clone()]), DEFAULT_TOL)
            .expect("single finite column")
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn rank(&self) -> usize {
        self.frame.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `frame · frameᴴ`.
    pub fn projector(&self) -> CMatrix {
        &self.frame * self.frame.adjoint()
    }

    fn joint_tol(&self, other: &Self) -> f64 {
        self.tol.max(other.tol)
    }

    fn same_dim(&self, other: &Self) -> Result<(), HilbertError> {
        if self.ambient_dim() == other.ambient_dim() {
            Ok(())
        } else {
            Err(HilbertError::DimensionMismatch(self.ambient_dim(), other.ambient_dim()))
        }
    }

    /// Frobenius distance between the two projectors.
    pub fn distance(&self, other: &Self) -> f64 {
        frobenius_distance(&self.projector(), &other.projector())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.ambient_dim() == other.ambient_dim() && self.distance(other) <= self.joint_tol(other)
    }

    /// How far the frame of `self` sticks out of `other`.
    pub fn inclusion_defect(&self, other: &Self) -> f64 {
        let outside = &self.frame - other.projector() * &self.frame;
        outside.norm()
    }

    /// Inclusion `self ⊆ other`, within tolerance.
    pub fn leq(&self, other: &Self) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.inclusion_defect(other) <= self.joint_tol(other)
    }

    /// Component of `v` inside the subspace is all of `v`, within tolerance.
    pub fn contains(&self, v: &CVector) -> bool {
        let rest = v - self.projector() * v;
        rest.norm() <= self.tol * v.norm().max(1.0)
    }

    /// Orthogonality of the two subspaces.
    pub fn is_orthogonal_to(&self, other: &Self) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && (self.frame.adjoint() * &other.frame).norm() <= self.joint_tol(other)
    }

    /// Intersection, as the kernel of `(I − P_A) + (I − P_B)`.
    pub fn meet(&self, other: &Self) -> Result<Self, HilbertError> {
        self.same_dim(other)?;
        let n = self.ambient_dim();
        let tol = self.joint_tol(other);
        let m = (identity(n) - self.projector()) + (identity(n) - other.projector());
        let eig = hermitian_eigen(&m);
        let scale = eig.eigenvalues.iter().copied().fold(1.0, f64::max);
        let keep: Vec<usize> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l <= tol * scale)
            .map(|(i, _)| i)
            .collect();
        Self::span(&eig.eigenvectors.select_columns(&keep), tol)
    }

    /// Span of the union.
    pub fn join(&self, other: &Self) -> Result<Self, HilbertError> {
        self.same_dim(other)?;
        let mut cols: Vec<CVector> = self.frame.column_iter().map(|c| c.into_owned()).collect();
        cols.extend(other.frame.column_iter().map(|c| c.into_owned()));
        Self::span_of(self.ambient_dim(), &cols, self.joint_tol(other))
    }

    /// Orthogonal complement.
    pub fn ortho(&self) -> Self {
        let n = self.ambient_dim();
        if self.is_zero() {
            return Self::full(n).with_tol(self.tol);
        }
        let eig = hermitian_eigen(&self.projector());
        let keep: Vec<usize> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l < 0.5)
            .map(|(i, _)| i)
            .collect();
        Self::span(&eig.eigenvectors.select_columns(&keep), self.tol)
            .expect("eigenvectors are finite")
    }

    /// Sasaki projection `A ∧ (B ∨ A⊥)` of `other` onto `self`, computed
    /// from the lattice formula and from the image `P_A B`. The two must
    /// agree; the projector image is returned.
    pub fn sasaki(&self, other: &Self) -> Result<Self, HilbertError> {
        let (image, discrepancy) = self.sasaki_with_discrepancy(other)?;
        if discrepancy > self.joint_tol(other) {
            return Err(HilbertError::CrossCheckFailed(discrepancy));
        }
        Ok(image)
    }

    /// Both Sasaki routes, returning the projector image and the projector
    /// distance between the two.
    pub fn sasaki_with_discrepancy(&self, other: &Self) -> Result<(Self, f64), HilbertError> {
        self.same_dim(other)?;
        let formula = self.meet(&other.join(&self.ortho())?)?;
        let image = self.image_of(other)?;
        let d = formula.distance(&image);
        Ok((image, d))
    }

    /// `span(P_A · frame(B))`.
    pub fn image_of(&self, other: &Self) -> Result<Self, HilbertError> {
        self.same_dim(other)?;
        Self::span_with_scale(&(self.projector() * &other.frame), self.joint_tol(other), Some(1.0))
    }

    /// Complex conjugate subspace `{conj(v) | v ∈ A}`.
    pub fn conjugate(&self) -> Self {
        Self { frame: self.frame.map(|z| z.conj()), tol: self.tol }
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> CVector {
        basis_vector(n, i)
    }

    #[test]
    fn span_examples() {
        let s = Subspace::span_of(2, &[e(2, 0), e(2, 0).scale(2.0)], DEFAULT_TOL).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s, Subspace::ray(&e(2, 0)));

        let s = Subspace::span_of(2, &[], DEFAULT_TOL).unwrap();
        assert!(s.is_zero());

        let m = CMatrix::from_columns(&[e(2, 0) + e(2, 1), e(2, 0) - e(2, 1)]);
        for s in crate::linalg::singular_values(&m) {
            assert!((s - 2f64.sqrt()).abs() < 1e-12);
        }
        assert_eq!(Subspace::span(&m, DEFAULT_TOL).unwrap(), Subspace::full(2));
    }

    #[test]
    fn span_errors() {
        let mut m = CMatrix::zeros(2, 1);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert_eq!(Subspace::span(&m, DEFAULT_TOL).unwrap_err(), HilbertError::NonFinite);
        assert!(matches!(
            Subspace::span_of(2, &[e(3, 0)], DEFAULT_TOL),
            Err(HilbertError::BadShape { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn lattice_operation_examples() {
        let r1 = Subspace::ray(&e(2, 0));
        let r2 = Subspace::ray(&e(2, 1));
        assert!(r1.meet(&r2).unwrap().is_zero());
        let diag = Subspace::ray(&(e(2, 0) + e(2, 1)));
        assert_eq!(r1.join(&diag).unwrap(), Subspace::full(2));

        let r = Subspace::ray(&e(3, 0));
        let expected = Subspace::span_of(3, &[e(3, 1), e(3, 2)], DEFAULT_TOL).unwrap();
        assert_eq!(r.ortho(), expected);
        assert!(Subspace::zero(3).ortho() == Subspace::full(3));
        assert!(Subspace::full(3).ortho().is_zero());

        assert!(matches!(r.meet(&r1), Err(HilbertError::DimensionMismatch(3, 2))));
    }

    #[test]
    fn sasaki_examples() {
        let r1 = Subspace::ray(&e(2, 0));
        let diag = Subspace::ray(&(e(2, 0) + e(2, 1)));
        assert_eq!(r1.sasaki(&diag).unwrap(), r1);
        assert!(r1.sasaki(&Subspace::ray(&e(2, 1))).unwrap().is_zero());

        let plane = Subspace::span_of(3, &[e(3, 0), e(3, 1)], DEFAULT_TOL).unwrap();
        let inside = Subspace::ray(&(e(3, 0) + e(3, 1).scale(3.0)));
        assert_eq!(plane.sasaki(&inside).unwrap(), inside);
    }

    #[test]
    fn projector_examples() {
        assert_eq!(Subspace::zero(3).projector(), CMatrix::zeros(3, 3));
        assert!(frobenius_distance(&Subspace::full(3).projector(), &identity(3)) < 1e-14);
        let p = Subspace::ray(&(e(2, 0) + e(2, 1))).projector();
        for z in p.iter() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-14);
        }
        assert!(hermiticity_defect(&p) < 1e-15);
        assert!(frobenius_distance(&(&p * &p), &p) < 1e-14);
    }

    #[test]
    fn distributivity_fails_in_c2() {
        let a = Subspace::ray(&e(2, 0));
        let b = Subspace::ray(&e(2, 1));
        let cc = Subspace::ray(&(e(2, 0) + e(2, 1)));
        let lhs = a.meet(&b.join(&cc).unwrap()).unwrap();
        let rhs = a.meet(&b).unwrap().join(&a.meet(&cc).unwrap()).unwrap();
        assert_eq!(lhs, a);
        assert!(rhs.is_zero());
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn complex_rays() {
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let r = Subspace::ray(&v);
        assert!(r.contains(&v.scale(3.0)));
        assert!(r.contains(&(v.clone() * c(0.0, 1.0))));
        assert!(r.conjugate().is_orthogonal_to(&r));
        assert!(r.leq(&Subspace::full(2)));
        assert!(!Subspace::full(2).leq(&r));
    }
}
