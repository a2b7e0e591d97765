//! Lüders transitions on density operators and the measurement cascade of a
//! two-part system.
//!
//! Measuring an atom on one side collapses that side's proper state. The
//! collapsed carrier is pushed through the state of compoundness, which
//! makes the image property actual on the other side. Only the two
//! measurement steps carry probability; the induction step in between is
//! deterministic.

use serde::Serialize;
use thiserror::Error;

use crate::compound::{CompoundError, CompoundOperator, TensorVector};
use crate::density::DensityState;
use crate::hilbert::{CMatrix, CVector, Subspace, DEFAULT_TOL};
use crate::random::{self, Rng};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CascadeError {
    #[error("operator is zero")]
    ZeroOperator,
    #[error("zero vector has no ray")]
    ZeroVector,
    #[error("measured property must be a ray, got rank {0}")]
    NotAnAtom(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Compound(#[from] CompoundError),
}

/// `Tr(P_a ρ)`, clamped to `[0, 1]`.
pub fn transition_probability(rho: &DensityState, a: &Subspace) -> f64 {
    (a.projector() * rho.matrix()).trace().re.clamp(0.0, 1.0)
}

/// The transition `Ψ(a)`: `P_a ρ P_a / Tr(P_a ρ P_a)`, or `None` when the
/// outcome is impossible (`Tr(P_a ρ) ≤ tol`).
pub fn lueders(rho: &DensityState, a: &Subspace) -> Option<DensityState> {
    let p = transition_probability(rho, a);
    if p <= a.tol() {
        return None;
    }
    let proj = a.projector();
    let sandwich = &proj * rho.matrix() * &proj;
    DensityState::normalized(sandwich).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    #[serde(rename = "1")]
    Left,
    #[serde(rename = "2")]
    Right,
}

impl Side {
    pub fn number(self) -> u8 {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// An atom is verified; the step carries the Born probability.
    Measurement,
    /// A property is made actual by the other side; probability one.
    Induction,
}

#[derive(Debug, Clone)]
pub struct CascadeStep {
    pub side: Side,
    pub kind: StepKind,
    pub measured_property: Subspace,
    pub pre_state: DensityState,
    pub post_state: Option<DensityState>,
    pub probability: f64,
    pub carrier_pre: Subspace,
    /// Zero subspace when the transition is empty.
    pub carrier_post: Subspace,
}

#[derive(Debug, Clone)]
pub struct CascadeTrace {
    pub steps: Vec<CascadeStep>,
    pub joint_probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    LeftFirst,
    RightFirst,
}

fn step(side: Side, kind: StepKind, rho: &DensityState, a: &Subspace) -> CascadeStep {
    let post = lueders(rho, a);
    let probability = match kind {
        StepKind::Measurement => transition_probability(rho, a),
        StepKind::Induction => 1.0,
    };
    let carrier_post = post
        .as_ref()
        .map(|r| r.support())
        .unwrap_or_else(|| Subspace::zero(rho.dim()));
    CascadeStep {
        side,
        kind,
        measured_property: a.clone(),
        pre_state: rho.clone(),
        post_state: post,
        probability: if carrier_post.is_zero() { 0.0 } else { probability },
        carrier_pre: rho.support(),
        carrier_post,
    }
}

/// Left side measured first.
pub fn run_cascade(f: &CompoundOperator, left_atom: &Subspace, right_atom: &Subspace) -> Result<CascadeTrace, CascadeError> {
    run_cascade_ordered(f, left_atom, right_atom, Order::LeftFirst)
}

pub fn run_cascade_ordered(
    f: &CompoundOperator,
    left_atom: &Subspace,
    right_atom: &Subspace,
    order: Order,
) -> Result<CascadeTrace, CascadeError> {
    if f.is_zero() {
        return Err(CascadeError::ZeroOperator);
    }
    for (atom, dim) in [(left_atom, f.dim_in()), (right_atom, f.dim_out())] {
        if atom.ambient_dim() != dim {
            return Err(CascadeError::DimensionMismatch(dim, atom.ambient_dim()));
        }
        if atom.rank() != 1 {
            return Err(CascadeError::NotAnAtom(atom.rank()));
        }
    }
    let quad = f.quadruple()?;
    let (first_side, first_rho, first_atom, induce, second_side, second_rho, second_atom) = match order {
        Order::LeftFirst => (Side::Left, &quad.rho1, left_atom, &quad.forward, Side::Right, &quad.rho2, right_atom),
        Order::RightFirst => (Side::Right, &quad.rho2, right_atom, &quad.backward, Side::Left, &quad.rho1, left_atom),
    };

    let mut steps = Vec::with_capacity(3);
    let first = step(first_side, StepKind::Measurement, first_rho, first_atom);
    let collapsed = first.carrier_post.clone();
    steps.push(first);
    if collapsed.is_zero() {
        return Ok(CascadeTrace { steps, joint_probability: 0.0 });
    }

    let induced = induce.induced_map(&collapsed)?;
    let second = step(second_side, StepKind::Induction, second_rho, &induced);
    let next = second.post_state.clone();
    steps.push(second);
    let Some(next) = next else {
        return Ok(CascadeTrace { steps, joint_probability: 0.0 });
    };

    steps.push(step(second_side, StepKind::Measurement, &next, second_atom));
    let joint_probability = steps.iter().map(|s| s.probability).product();
    Ok(CascadeTrace { steps, joint_probability })
}

/// Born probability of the product outcome `ψ ⊗ φ` for the vector
/// `Σ c_i ψ_i ⊗ φ_i`, computed directly in `C^{n1 n2}`.
pub fn born_probability(tv: &TensorVector, psi: &CVector, phi: &CVector) -> Result<f64, CascadeError> {
    if psi.norm() == 0.0 || phi.norm() == 0.0 {
        return Err(CascadeError::ZeroVector);
    }
    if psi.len() != tv.left_dim() {
        return Err(CascadeError::DimensionMismatch(tv.left_dim(), psi.len()));
    }
    if phi.len() != tv.right_dim() {
        return Err(CascadeError::DimensionMismatch(tv.right_dim(), phi.len()));
    }
    let weight = tv.coefficients().norm_squared();
    if weight == 0.0 {
        return Err(CascadeError::ZeroOperator);
    }
    let n = tv.left_dim() * tv.right_dim();
    let mut state = CVector::zeros(n);
    for i in 0..tv.terms() {
        let left = tv.left_basis().column(i).into_owned();
        let right = tv.right_basis().column(i).into_owned();
        state += left.kronecker(&right) * tv.coefficients()[i];
    }
    let outcome = psi.kronecker(phi);
    let amplitude = outcome.dotc(&state);
    let p = amplitude.norm_sqr() / (psi.norm_squared() * phi.norm_squared() * weight);
    Ok(p.clamp(0.0, 1.0))
}

/// Checks that the trace is a chain in the carrier order: on each side every
/// step starts from the state the previous step on that side produced,
/// induction steps only shrink the carrier, and every non-empty outcome lies
/// inside the measured property.
pub fn chain_order_check(trace: &CascadeTrace) -> bool {
    for side in [Side::Left, Side::Right] {
        let mut previous: Option<&CascadeStep> = None;
        for s in trace.steps.iter().filter(|s| s.side == side) {
            if let Some(prev) = previous {
                let Some(prev_post) = &prev.post_state else {
                    return false;
                };
                if prev_post.distance(&s.pre_state) > DEFAULT_TOL {
                    return false;
                }
            }
            if s.kind == StepKind::Induction && !s.carrier_post.leq(&s.carrier_pre) {
                return false;
            }
            if !s.carrier_post.leq(&s.measured_property) {
                return false;
            }
            previous = Some(s);
        }
    }
    true
}

/// Outcome of [`check_prop2`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct Prop2Report {
    pub dim: usize,
    pub trials: usize,
    pub fixed_point_max: f64,
    pub compatibility_max: f64,
    pub composition_max: f64,
    pub sasaki_bridge_max: f64,
    pub counterexamples: Vec<Prop2Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Counterexample {
    pub condition: &'static str,
    pub trial: usize,
    pub discrepancy: f64,
}

impl Prop2Report {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn record(&mut self, condition: &'static str, trial: usize, discrepancy: f64, tol: f64) {
        let slot = match condition {
            "fixed-point" => &mut self.fixed_point_max,
            "compatibility" => &mut self.compatibility_max,
            "composition" => &mut self.composition_max,
            _ => &mut self.sasaki_bridge_max,
        };
        *slot = slot.max(discrepancy);
        if discrepancy.is_nan() || discrepancy > tol {
            self.counterexamples.push(Prop2Counterexample { condition, trial, discrepancy });
        }
    }
}

/// Distance between two optional transition outcomes; infinite when only
/// one of them is empty.
fn outcome_distance(a: &Option<DensityState>, b: &Option<DensityState>) -> f64 {
    match (a, b) {
        (None, None) => 0.0,
        (Some(x), Some(y)) => x.distance(y),
        _ => f64::INFINITY,
    }
}

fn density_in(rng: &mut Rng, support: &Subspace) -> DensityState {
    let rank = random::usize_in(rng, 1, support.rank());
    DensityState::normalized(random::density_in(rng, support, rank)).expect("random density is valid")
}

/// A subspace of `a` with random rank in `1..=rank(a)`.
fn random_subspace_of(rng: &mut Rng, a: &Subspace) -> Subspace {
    let k = random::usize_in(rng, 1, a.rank());
    let inner = random::frame(rng, a.rank(), k);
    Subspace::span(&(a.frame() * inner), DEFAULT_TOL).expect("finite frame")
}

/// Randomised check, at tolerance `1e-9`, of the three hypotheses on the
/// Lüders transitions and of `carrier(Ψ(a)ρ) = φ_a(carrier ρ)`.
pub fn check_prop2(dim: usize, trials: usize, rng: &mut Rng) -> Result<Prop2Report, CascadeError> {
    if !(2..=4).contains(&dim) {
        return Err(CascadeError::UnsupportedDimension(dim));
    }
    let tol = DEFAULT_TOL;
    let mut report = Prop2Report { dim, trials, ..Default::default() };
    for t in 0..trials {
        // (i) states whose carrier lies in a are fixed.
        let k = random::usize_in(rng, 1, dim);
        let a = random::subspace(rng, dim, k);
        let inside = random_subspace_of(rng, &a);
        let rho = density_in(rng, &inside);
        let d = lueders(&rho, &a).map_or(f64::INFINITY, |r| r.distance(&rho));
        report.record("fixed-point", t, d, tol);

        // (ii) actual properties compatible with a stay actual.
        let u = random::unitary(rng, dim);
        let pick = |rng: &mut Rng| -> Subspace {
            let mut cols: Vec<usize> = (0..dim).filter(|_| random::coin(rng)).collect();
            if cols.is_empty() {
                cols.push(random::usize_in(rng, 0, dim - 1));
            }
            Subspace::span(&u.select_columns(&cols), tol).expect("finite frame")
        };
        let (a, b) = (pick(rng), pick(rng));
        let (pa, pb) = (a.projector(), b.projector());
        let commutator = (&pa * &pb - &pb * &pa).norm();
        let rho = density_in(rng, &b);
        let d = match lueders(&rho, &a) {
            Some(post) => post.support().inclusion_defect(&b).max(commutator),
            None => commutator,
        };
        report.record("compatibility", t, d, tol);

        // (iii) Ψ(a') ∘ Ψ(a) = Ψ(a') for a' ⊆ a.
        let k = random::usize_in(rng, 1, dim);
        let a = random::subspace(rng, dim, k);
        let a_prime = random_subspace_of(rng, &a);
        let rho = density_in(rng, &Subspace::full(dim));
        let nested = lueders(&rho, &a).and_then(|r| lueders(&r, &a_prime));
        let direct = lueders(&rho, &a_prime);
        report.record("composition", t, outcome_distance(&nested, &direct), tol);

        // Bridge to the Sasaki projection on carriers.
        let a = random::any_subspace(rng, dim);
        let k = random::usize_in(rng, 1, dim);
        let support = random::subspace(rng, dim, k);
        let rho = density_in(rng, &support);
        let sasaki = a.sasaki(&rho.support());
        let d = match (lueders(&rho, &a), sasaki) {
            (Some(post), Ok(s)) => post.support().distance(&s),
            (None, Ok(s)) => {
                if s.is_zero() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            (_, Err(_)) => f64::INFINITY,
        };
        report.record("sasaki-bridge", t, d, tol);
    }
    Ok(report)
}

/// Random orthonormal basis of `C^n` as rays.
pub fn random_basis_rays(rng: &mut Rng, n: usize) -> Vec<CVector> {
    let u = random::unitary(rng, n);
    u.column_iter().map(|col| col.into_owned()).collect()
}

/// `|ψ⟩⟨ψ|` as a matrix, for tests and reports.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compound::{from_tensor, Linearity};
    use crate::hilbert::{basis_vector as e, c};

    fn half_identity_operator() -> CompoundOperator {
        CompoundOperator::linear(CMatrix::identity(2, 2).scale(0.5f64.sqrt())).unwrap()
    }

    #[test]
    fn lueders_examples() {
        let mut rng = random::seeded(1);
        let a = random::subspace(&mut rng, 3, 2);
        let rho = DensityState::normalized(random::density_in(&mut rng, &a, 2)).unwrap();
        assert!(lueders(&rho, &a).unwrap().distance(&rho) < 1e-12);

        let mixed = DensityState::maximally_mixed(2);
        let post = lueders(&mixed, &Subspace::ray(&e(2, 0))).unwrap();
        assert!((post.matrix() - outer(&e(2, 0))).norm() < 1e-15);

        let pure = DensityState::pure(&e(2, 0)).unwrap();
        assert!(lueders(&pure, &Subspace::ray(&e(2, 1))).is_none());
    }

    #[test]
    fn transition_probability_examples() {
        let mut rng = random::seeded(2);
        let pure = DensityState::pure(&e(3, 0)).unwrap();
        let plane = Subspace::span_of(3, &[e(3, 0), e(3, 1)], DEFAULT_TOL).unwrap();
        assert!((transition_probability(&pure, &plane) - 1.0).abs() < 1e-15);
        assert!(transition_probability(&pure, &Subspace::ray(&e(3, 2))) < 1e-30);
        let mixed = DensityState::maximally_mixed(2);
        for _ in 0..10 {
            let r = random::ray(&mut rng, 2);
            assert!((transition_probability(&mixed, &r) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn cascade_examples() {
        let f = half_identity_operator();
        let trace = run_cascade(&f, &Subspace::ray(&e(2, 0)), &Subspace::ray(&e(2, 0))).unwrap();
        assert_eq!(trace.steps.len(), 3);
        assert!((trace.steps[0].probability - 0.5).abs() < 1e-12);
        let induced = trace.steps[1].post_state.as_ref().unwrap();
        assert!((induced.matrix() - outer(&e(2, 0))).norm() < 1e-12);
        assert!((trace.steps[2].probability - 1.0).abs() < 1e-12);
        assert!((trace.joint_probability - 0.5).abs() < 1e-12);
        assert!(chain_order_check(&trace));

        let trace = run_cascade(&f, &Subspace::ray(&e(2, 0)), &Subspace::ray(&e(2, 1))).unwrap();
        assert_eq!(trace.joint_probability, 0.0);
    }

    #[test]
    fn product_state_factorizes() {
        let mut rng = random::seeded(4);
        let psi1 = random::vector(&mut rng, 3).normalize();
        let phi1 = random::vector(&mut rng, 2).normalize();
        let f = CompoundOperator::linear(&phi1 * psi1.adjoint()).unwrap();
        let quad = f.quadruple().unwrap();
        for _ in 0..10 {
            let left = random::ray(&mut rng, 3);
            let right = random::ray(&mut rng, 2);
            let trace = run_cascade(&f, &left, &right).unwrap();
            let p_left = transition_probability(&quad.rho1, &left);
            let p_right = transition_probability(&quad.rho2, &right);
            assert!((trace.joint_probability - p_left * p_right).abs() < 1e-12);
            assert!(chain_order_check(&trace));
            let left_steps = trace.steps.iter().filter(|s| s.side == Side::Left).count();
            let right_steps = trace.steps.iter().filter(|s| s.side == Side::Right).count();
            assert!(left_steps <= 2 && right_steps <= 2);
        }
    }

    #[test]
    fn reversed_trace_fails_chain_check() {
        let f = half_identity_operator();
        let mut trace = run_cascade(&f, &Subspace::ray(&e(2, 0)), &Subspace::ray(&(e(2, 0) + e(2, 1)))).unwrap();
        assert!(chain_order_check(&trace));
        trace.steps.reverse();
        assert!(!chain_order_check(&trace));
    }

    #[test]
    fn cascade_errors() {
        let zero = CompoundOperator::zero(2, 2, Linearity::Linear);
        let r = Subspace::ray(&e(2, 0));
        assert_eq!(run_cascade(&zero, &r, &r).unwrap_err(), CascadeError::ZeroOperator);
        let f = half_identity_operator();
        assert_eq!(
            run_cascade(&f, &Subspace::full(2), &r).unwrap_err(),
            CascadeError::NotAnAtom(2)
        );
        assert_eq!(
            run_cascade(&f, &Subspace::ray(&e(3, 0)), &r).unwrap_err(),
            CascadeError::DimensionMismatch(2, 3)
        );
    }

    #[test]
    fn born_examples() {
        let one = TensorVector::diagonal(CVector::from_vec(vec![c(1.0, 0.0)]), 2, 2).unwrap();
        assert!((born_probability(&one, &e(2, 0), &e(2, 0)).unwrap() - 1.0).abs() < 1e-15);

        let s = 0.5f64.sqrt();
        let singlet = TensorVector::diagonal(CVector::from_vec(vec![c(s, 0.0), c(-s, 0.0)]), 2, 2).unwrap();
        assert!((born_probability(&singlet, &e(2, 0), &e(2, 1)).unwrap()).abs() < 1e-15);
        assert!((born_probability(&singlet, &e(2, 0), &e(2, 0)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            born_probability(&singlet, &CVector::zeros(2), &e(2, 0)).unwrap_err(),
            CascadeError::ZeroVector
        );
    }

    #[test]
    fn cascade_matches_born_on_a_singlet() {
        let s = 0.5f64.sqrt();
        let singlet = TensorVector::diagonal(CVector::from_vec(vec![c(s, 0.0), c(-s, 0.0)]), 2, 2).unwrap();
        let f = from_tensor(&singlet, Linearity::Antilinear);
        let psi = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let phi = CVector::from_vec(vec![c(0.3, 0.0), c(0.1, -0.7)]);
        let trace = run_cascade(&f, &Subspace::ray(&psi), &Subspace::ray(&phi)).unwrap();
        let born = born_probability(&singlet, &psi, &phi).unwrap();
        assert!((trace.joint_probability - born).abs() < 1e-12);
    }

    #[test]
    fn prop2_examples() {
        let mixed = DensityState::maximally_mixed(2);
        let a = Subspace::full(2);
        let a_prime = Subspace::ray(&e(2, 0));
        let nested = lueders(&lueders(&mixed, &a).unwrap(), &a_prime).unwrap();
        let direct = lueders(&mixed, &a_prime).unwrap();
        assert!((nested.matrix() - outer(&e(2, 0))).norm() < 1e-15);
        assert!((direct.matrix() - outer(&e(2, 0))).norm() < 1e-15);

        let mut rng = random::seeded(9);
        for dim in 2..=3 {
            let report = check_prop2(dim, 50, &mut rng).unwrap();
            assert!(report.passed(), "{report:?}");
        }
        assert_eq!(check_prop2(5, 1, &mut rng).unwrap_err(), CascadeError::UnsupportedDimension(5));
    }

    #[test]
    fn lueders_is_idempotent() {
        let mut rng = random::seeded(12);
        for _ in 0..50 {
            let rho = DensityState::normalized(random::density(&mut rng, 3)).unwrap();
            let a = random::any_subspace(&mut rng, 3);
            match lueders(&rho, &a) {
                Some(once) => assert!(lueders(&once, &a).unwrap().distance(&once) < 1e-9),
                None => assert!(transition_probability(&rho, &a) <= DEFAULT_TOL),
            }
            let p = transition_probability(&rho, &a) + transition_probability(&rho, &a.ortho());
            assert!((p - 1.0).abs() < 1e-12);
        }
    }
}
