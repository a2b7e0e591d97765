//! Atomic states of compoundness in the Hilbert space case.
//!
//! An atomic state of compoundness `H1 → H2` is represented by a linear or
//! anti-linear operator. Both are stored as a matrix in the computational
//! bases plus a flag; the anti-linear action is `M · conj(v)`.
//!
//! Under the operator/tensor correspondence a coefficient list `c_i` with
//! orthonormal families `ψ_i ⊂ H1` and `φ_i ⊂ H2` gives
//!
//! * the linear operator `v ↦ Σ c_i ⟨ψ_i|v⟩ φ_i`, matrix `Σ c_i φ_i ψ_iᴴ`;
//! * the anti-linear operator `v ↦ Σ c_i ⟨v|ψ_i⟩ φ_i`, matrix `Σ c_i φ_i ψ_iᵀ`.
//!
//! The anti-linear matrix is exactly the coefficient matrix of the vector
//! `Σ c_i ψ_i ⊗ φ_i` (rows indexed by `H2`, columns by `H1`), which is why the
//! measurement cascade reproduces tensor-product probabilities with it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{DensityError, DensityState};
use crate::hilbert::{is_finite, CMatrix, CVector, HilbertError, Subspace, DEFAULT_TOL};
use crate::random::{self, Rng};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompoundError {
    #[error("bad shape: expected length {expected}, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("operator matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("basis is not orthonormal or does not match the coefficients: {0}")]
    BadBasis(String),
    #[error("operator is not diagonal in the given bases (residual {0:e})")]
    NotDiagonal(f64),
    #[error("operator is zero")]
    ZeroOperator,
    #[error("operators have different shapes or linearity")]
    Mismatch,
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linearity {
    Linear,
    Antilinear,
}

impl Linearity {
    /// Linearity of a composite: two anti-linear factors cancel.
    pub fn compose(self, inner: Self) -> Self {
        if self == inner {
            Linearity::Linear
        } else {
            Linearity::Antilinear
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompoundOperator {
    matrix: CMatrix,
    linearity: Linearity,
}

impl CompoundOperator {
    pub fn new(matrix: CMatrix, linearity: Linearity) -> Result<Self, CompoundError> {
        if !is_finite(&matrix) {
            return Err(CompoundError::NonFinite);
        }
        Ok(Self { matrix, linearity })
    }

    pub fn linear(matrix: CMatrix) -> Result<Self, CompoundError> {
        Self::new(matrix, Linearity::Linear)
    }

    pub fn antilinear(matrix: CMatrix) -> Result<Self, CompoundError> {
        Self::new(matrix, Linearity::Antilinear)
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: CMatrix::identity(n, n), linearity: Linearity::Linear }
    }

    /// The absurd state: the zero operator.
    pub fn zero(dim_in: usize, dim_out: usize, linearity: Linearity) -> Self {
        Self { matrix: CMatrix::zeros(dim_out, dim_in), linearity }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn linearity(&self) -> Linearity {
        self.linearity
    }

    pub fn dim_in(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.hs_norm() == 0.0
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector, CompoundError> {
        if v.len() != self.dim_in() {
            return Err(CompoundError::BadShape { expected: self.dim_in(), got: v.len() });
        }
        Ok(match self.linearity {
            Linearity::Linear => &self.matrix * v,
            Linearity::Antilinear => &self.matrix * v.conjugate(),
        })
    }

    fn apply_columns(&self, m: &CMatrix) -> CMatrix {
        match self.linearity {
            Linearity::Linear => &self.matrix * m,
            Linearity::Antilinear => &self.matrix * m.conjugate(),
        }
    }

    /// The adjoint operator `H2 → H1`. For the anti-linear case it is the
    /// anti-linear map with `⟨w, F v⟩ = ⟨v, F† w⟩`, whose matrix is `Mᵀ`.
    pub fn adjoint(&self) -> Self {
        let matrix = match self.linearity {
            Linearity::Linear => self.matrix.adjoint(),
            Linearity::Antilinear => self.matrix.transpose(),
        };
        Self { matrix, linearity: self.linearity }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, CompoundError> {
        if inner.dim_out() != self.dim_in() {
            return Err(CompoundError::BadShape { expected: self.dim_in(), got: inner.dim_out() });
        }
        let inner_matrix = match self.linearity {
            Linearity::Linear => inner.matrix.clone(),
            Linearity::Antilinear => inner.matrix.conjugate(),
        };
        Ok(Self {
            matrix: &self.matrix * inner_matrix,
            linearity: self.linearity.compose(inner.linearity),
        })
    }

    /// The lattice map `A ↦ span(F · frame(A))`.
    pub fn induced_map(&self, a: &Subspace) -> Result<Subspace, CompoundError> {
        if a.ambient_dim() != self.dim_in() {
            return Err(HilbertError::DimensionMismatch(self.dim_in(), a.ambient_dim()).into());
        }
        let norm = self.operator_norm();
        if norm == 0.0 {
            return Ok(Subspace::zero(self.dim_out()).with_tol(a.tol()));
        }
        Ok(Subspace::span_with_scale(&self.apply_columns(a.frame()), a.tol(), Some(norm))?)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.matrix.is_empty() {
            return 0.0;
        }
        crate::linalg::singular_values(&self.matrix).first().copied().unwrap_or(0.0)
    }

    /// `√(Σ |M_ij|²)`.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `(F, F†F / Tr, F F† / Tr, F†)`.
    pub fn quadruple(&self) -> Result<Quadruple, CompoundError> {
        if self.is_zero() {
            return Err(CompoundError::ZeroOperator);
        }
        let backward = self.adjoint();
        let rho1 = DensityState::normalized(backward.compose(self)?.matrix)?;
        let rho2 = DensityState::normalized(self.compose(&backward)?.matrix)?;
        Ok(Quadruple { forward: self.clone(), rho1, rho2, backward })
    }
}

/// A state of compoundness together with the two reduced proper states and
/// the reverse induction map.
#[derive(Debug, Clone)]
pub struct Quadruple {
    pub forward: CompoundOperator,
    pub rho1: DensityState,
    pub rho2: DensityState,
    pub backward: CompoundOperator,
}

/// `Σ c_i ψ_i ⊗ φ_i` in biorthogonal form.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorVector {
    coefficients: CVector,
    left_basis: CMatrix,
    right_basis: CMatrix,
}

fn orthonormality_defect(frame: &CMatrix) -> f64 {
    (frame.adjoint() * frame - CMatrix::identity(frame.ncols(), frame.ncols())).norm()
}

impl TensorVector {
    /// `left_basis` is `n1 × m`, `right_basis` is `n2 × m`, both with
    /// orthonormal columns.
    pub fn new(coefficients: CVector, left_basis: CMatrix, right_basis: CMatrix) -> Result<Self, CompoundError> {
        let m = coefficients.len();
        if left_basis.ncols() != m || right_basis.ncols() != m {
            return Err(CompoundError::BadBasis(format!(
                "{m} coefficients but bases with {} and {} vectors",
                left_basis.ncols(),
                right_basis.ncols()
            )));
        }
        if !(is_finite(&left_basis) && is_finite(&right_basis))
            || coefficients.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(CompoundError::NonFinite);
        }
        for (side, b) in [("left", &left_basis), ("right", &right_basis)] {
            let d = orthonormality_defect(b);
            if d > DEFAULT_TOL {
                return Err(CompoundError::BadBasis(format!("{side} basis defect {d:e}")));
            }
        }
        Ok(Self { coefficients, left_basis, right_basis })
    }

    /// Coefficients on the leading computational basis vectors of
    /// `C^n1` and `C^n2`.
    pub fn diagonal(coefficients: CVector, n1: usize, n2: usize) -> Result<Self, CompoundError> {
        let m = coefficients.len();
        if m > n1 || m > n2 {
            return Err(CompoundError::BadBasis(format!("{m} terms do not fit in C^{n1} ⊗ C^{n2}")));
        }
        Self::new(
            coefficients,
            CMatrix::identity(n1, n1).columns(0, m).into_owned(),
            CMatrix::identity(n2, n2).columns(0, m).into_owned(),
        )
    }

    /// Random coefficients and random orthonormal families.
    pub fn random(rng: &mut Rng, m: usize, n1: usize, n2: usize) -> Self {
        Self {
            coefficients: random::vector(rng, m),
            left_basis: random::frame(rng, n1, m),
            right_basis: random::frame(rng, n2, m),
        }
    }

    pub fn coefficients(&self) -> &CVector {
        &self.coefficients
    }

    pub fn left_basis(&self) -> &CMatrix {
        &self.left_basis
    }

    pub fn right_basis(&self) -> &CMatrix {
        &self.right_basis
    }

    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn left_dim(&self) -> usize {
        self.left_basis.nrows()
    }

    pub fn right_dim(&self) -> usize {
        self.right_basis.nrows()
    }

    /// `‖c‖₂`, the norm of the vector in `H1 ⊗ H2`.
    pub fn norm(&self) -> f64 {
        self.coefficients.norm()
    }

    /// The coefficient matrix `Σ c_i φ_i ψ_iᵀ` (`n2 × n1`), i.e. the vector
    /// reshaped with `H2` as row index.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let scaled = CMatrix::from_fn(self.right_dim(), self.terms(), |r, i| {
            self.right_basis[(r, i)] * self.coefficients[i]
        });
        scaled * self.left_basis.transpose()
    }

    /// Distance between the two vectors of `H1 ⊗ H2` they denote.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.left_dim() != other.left_dim() || self.right_dim() != other.right_dim() {
            return f64::INFINITY;
        }
        (self.coefficient_matrix() - other.coefficient_matrix()).norm()
    }
}

/// Builds the operator for `Σ c_i ψ_i ⊗ φ_i`: `Σ c_i ⟨ψ_i|−⟩ φ_i` for the
/// linear flag, `Σ c_i ⟨−|ψ_i⟩ φ_i` for the anti-linear one.
pub fn from_tensor(tv: &TensorVector, linearity: Linearity) -> CompoundOperator {
    let left = match linearity {
        Linearity::Linear => tv.left_basis.conjugate(),
        Linearity::Antilinear => tv.left_basis.clone(),
    };
    let scaled = CMatrix::from_fn(tv.right_dim(), tv.terms(), |r, i| {
        tv.right_basis[(r, i)] * tv.coefficients[i]
    });
    CompoundOperator { matrix: scaled * left.transpose(), linearity }
}

/// Reads off `c_i` in the given bases. Fails with
/// [`CompoundError::NotDiagonal`] when `F` is not of the form `Σ c_i ψ_i ⊗ φ_i`
/// for these families.
pub fn to_tensor(f: &CompoundOperator, left_basis: &CMatrix, right_basis: &CMatrix) -> Result<TensorVector, CompoundError> {
    if left_basis.nrows() != f.dim_in() {
        return Err(CompoundError::BadBasis(format!(
            "left basis lives in C^{}, operator domain is C^{}",
            left_basis.nrows(),
            f.dim_in()
        )));
    }
    if right_basis.nrows() != f.dim_out() {
        return Err(CompoundError::BadBasis(format!(
            "right basis lives in C^{}, operator codomain is C^{}",
            right_basis.nrows(),
            f.dim_out()
        )));
    }
    let m = left_basis.ncols();
    // F applied to ψ_i is c_i φ_i for both flags.
    let images = f.apply_columns(left_basis);
    let coefficients = CVector::from_fn(m, |i, _| {
        right_basis.column(i).dotc(&images.column(i))
    });
    let tv = TensorVector::new(coefficients, left_basis.clone(), right_basis.clone())?;
    let residual = (from_tensor(&tv, f.linearity).matrix - &f.matrix).norm();
    if residual > DEFAULT_TOL * f.hs_norm().max(1.0) {
        return Err(CompoundError::NotDiagonal(residual));
    }
    Ok(tv)
}

/// Schmidt form of `F` from its singular value decomposition. Always exists;
/// coefficients are real, positive and in decreasing order.
pub fn schmidt(f: &CompoundOperator) -> TensorVector {
    let (n2, n1) = f.matrix.shape();
    if f.is_zero() {
        return TensorVector {
            coefficients: CVector::zeros(0),
            left_basis: CMatrix::zeros(n1, 0),
            right_basis: CMatrix::zeros(n2, 0),
        };
    }
    let svd = crate::linalg::svd(&f.matrix);
    let (u, v) = (svd.u, svd.v);
    let smax = svd.s[0];
    let mut order: Vec<usize> = (0..svd.s.len())
        .filter(|&i| svd.s[i] > DEFAULT_TOL * smax)
        .collect();
    order.sort_by(|&a, &b| svd.s[b].total_cmp(&svd.s[a]));
    let coefficients = CVector::from_iterator(
        order.len(),
        order.iter().map(|&i| crate::hilbert::c(svd.s[i], 0.0)),
    );
    let right_basis = u.select_columns(&order);
    let left = v.select_columns(&order);
    let left_basis = match f.linearity {
        Linearity::Linear => left,
        Linearity::Antilinear => left.conjugate(),
    };
    TensorVector { coefficients, left_basis, right_basis }
}

/// Result of sampling the induced lattice maps of `F` and `G` on random rays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub samples: usize,
    /// `f(r) ⊆ g(r)` held on every sampled ray.
    pub order_holds: bool,
    pub f_is_zero: bool,
    /// `f(r) = g(r)` on every sampled ray.
    pub equal_on_samples: bool,
    /// False only if `f ≤ g`, `f ≠ 0` and `f ≠ g` were all observed.
    pub consistent_with_prop1: bool,
    /// A ray with `f(r) ⊄ g(r)`, or with `f(r) ≠ g(r)` when the order held.
    pub witness: Option<Vec<(f64, f64)>>,
}

/// Falsification harness for the claim that a nonzero atom-preserving state
/// of compoundness has nothing strictly above it among such states.
pub fn atomicity_probe(
    f: &CompoundOperator,
    g: &CompoundOperator,
    samples: usize,
    rng: &mut Rng,
) -> Result<ProbeReport, CompoundError> {
    if f.matrix.shape() != g.matrix.shape() || f.linearity != g.linearity {
        return Err(CompoundError::Mismatch);
    }
    let as_pairs = |v: &CVector| v.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>();
    let mut order_witness = None;
    let mut unequal_witness = None;
    for _ in 0..samples {
        let v = random::vector(rng, f.dim_in());
        let r = Subspace::ray(&v);
        let fr = f.induced_map(&r)?;
        let gr = g.induced_map(&r)?;
        if !fr.leq(&gr) {
            order_witness = Some(as_pairs(&v));
            break;
        }
        if unequal_witness.is_none() && !fr.approx_eq(&gr) {
            unequal_witness = Some(as_pairs(&v));
        }
    }
    let order_holds = order_witness.is_none();
    let f_is_zero = f.is_zero();
    let equal_on_samples = order_holds && unequal_witness.is_none();
    let consistent_with_prop1 = !(order_holds && !f_is_zero && !equal_on_samples);
    Ok(ProbeReport {
        samples,
        order_holds,
        f_is_zero,
        equal_on_samples,
        consistent_with_prop1,
        witness: order_witness.or(unequal_witness),
    })
}
