//! Density operators: the proper states of an individual quantum system.

use thiserror::Error;

use crate::hilbert::{hermitian_eigen, hermiticity_defect, is_finite, CMatrix, CVector, Subspace, DEFAULT_TOL};

/// Largest tolerated entry of `|ρ − ρᴴ|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative tolerated eigenvalue.
pub const PSD_TOL: f64 = 1e-10;
/// Largest tolerated `|Tr ρ − 1|`.
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("density matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("density matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("not Hermitian: defect {0:e}")]
    NotHermitian(f64),
    #[error("not positive semidefinite: eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("operator has zero trace and cannot be normalised")]
    ZeroTrace,
}

#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: CMatrix,
}

impl DensityState {
    /// Validates Hermiticity, positivity and unit trace.
    pub fn new(matrix: CMatrix) -> Result<Self, DensityError> {
        if !matrix.is_square() {
            return Err(DensityError::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        if !is_finite(&matrix) {
            return Err(DensityError::NonFinite);
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(DensityError::NotHermitian(defect));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(DensityError::BadTrace(tr));
        }
        let min = hermitian_eigen(&matrix).eigenvalues.min();
        if min < -PSD_TOL {
            return Err(DensityError::NotPositive(min));
        }
        Ok(Self { matrix })
    }

    /// Symmetrises and trace-normalises a positive operator, then validates.
    pub fn normalized(matrix: CMatrix) -> Result<Self, DensityError> {
        if !matrix.is_square() {
            return Err(DensityError::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let tr = sym.trace().re;
        if !tr.is_finite() {
            return Err(DensityError::NonFinite);
        }
        if tr <= 0.0 {
            return Err(DensityError::ZeroTrace);
        }
        Self::new(sym.unscale(tr))
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure(v: &CVector) -> Result<Self, DensityError> {
        Self::normalized(v * v.adjoint())
    }

    /// Maximally mixed state `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self { matrix: CMatrix::identity(n, n).unscale(n as f64) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.matrix).eigenvalues.min()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// The range of `ρ`: span of eigenvectors whose eigenvalue exceeds `tol`
    /// times the largest one. This is the strongest actual property.
    pub fn carrier(&self, tol: f64) -> Subspace {
        let eig = hermitian_eigen(&self.matrix);
        let max = eig.eigenvalues.max();
        let keep: Vec<usize> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > tol * max)
            .map(|(i, _)| i)
            .collect();
        Subspace::span(&eig.eigenvectors.select_columns(&keep), tol).expect("eigenvectors are finite")
    }

    /// Carrier at [`DEFAULT_TOL`].
    pub fn support(&self) -> Subspace {
        self.carrier(DEFAULT_TOL)
    }

    /// Frobenius distance between the two matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{basis_vector, c};

    #[test]
    fn validation() {
        assert!(DensityState::new(CMatrix::identity(2, 2)).is_err());
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(DensityState::new(m), Err(DensityError::NotPositive(_))));
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(DensityState::new(m), Err(DensityError::NotHermitian(_))));
        assert_eq!(DensityState::normalized(CMatrix::zeros(2, 2)).unwrap_err(), DensityError::ZeroTrace);
        assert!(matches!(
            DensityState::new(CMatrix::zeros(2, 3)),
            Err(DensityError::NotSquare(2, 3))
        ));
    }

    #[test]
    fn carrier_examples() {
        let psi = basis_vector(2, 0) + basis_vector(2, 1) * c(0.0, 1.0);
        let rho = DensityState::pure(&psi).unwrap();
        assert_eq!(rho.support(), Subspace::ray(&psi));
        assert_eq!(DensityState::maximally_mixed(2).support(), Subspace::full(2));

        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.999999, 0.0);
        m[(1, 1)] = c(1e-15, 0.0);
        let rho = DensityState::normalized(m).unwrap();
        assert_eq!(rho.carrier(1e-9), Subspace::ray(&basis_vector(2, 0)));
    }
}
