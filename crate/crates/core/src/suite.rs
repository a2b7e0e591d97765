//! Seeded randomised verification suites.
//!
//! Trial `i` of a run draws from its own stream `trial_rng(seed, i)`, so a
//! report depends only on the suite name, the seed and the trial count
//! (apart from `elapsed_ms`).

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cascade::{born_probability, CascadeError, chain_order_check, check_prop2, run_cascade_ordered, Order};
use crate::compound::{from_tensor, schmidt, to_tensor, CompoundOperator, Linearity, TensorVector};
use crate::galois::{adjoint_of_meetmap, enumerate_q, galois_dual, pointwise_join, pointwise_meet, JoinMap, QLattice};
use crate::hilbert::{Subspace, DEFAULT_TOL};
use crate::io::{MatrixJson, TensorJson, VectorJson};
use crate::lattice::FiniteLattice;
use crate::quantale::{
    compose, enumerate_members, is_member, property_propagation, union_join, ProperStateSpace, TransitionMap,
};
use crate::random::{self, trial_rng, Rng};

pub const SUITES: [&str; 8] = [
    "galois",
    "orthomodular",
    "sasaki",
    "tensor-iso",
    "quadruple",
    "cascade-born",
    "prop2",
    "quantale",
];

/// Tolerance of the tensor-isomorphism suite.
pub const TENSOR_TOL: f64 = 1e-12;
/// Density-operator tolerances of the quadruple suite.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`; available: {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub law: String,
    pub inputs: Value,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub max_discrepancy: f64,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Process exit code for this report.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Collects discrepancies for one run.
struct Recorder {
    tol: f64,
    max: f64,
    failures: Vec<Failure>,
}

impl Recorder {
    fn new(tol: f64) -> Self {
        Self { tol, max: 0.0, failures: Vec::new() }
    }

    fn check(&mut self, law: &str, discrepancy: f64, inputs: impl FnOnce() -> Value) {
        self.check_at(law, discrepancy, self.tol, inputs);
    }

    fn check_at(&mut self, law: &str, discrepancy: f64, tol: f64, inputs: impl FnOnce() -> Value) {
        if discrepancy.is_nan() || discrepancy > tol {
            self.failures.push(Failure { law: law.to_owned(), inputs: inputs(), discrepancy });
        }
        if discrepancy.is_nan() {
            self.max = f64::NAN;
        } else if !self.max.is_nan() {
            self.max = self.max.max(discrepancy);
        }
    }

    /// Exact laws: discrepancy 1 on failure.
    fn holds(&mut self, law: &str, ok: bool, inputs: impl FnOnce() -> Value) {
        self.check_at(law, if ok { 0.0 } else { 1.0 }, 0.0, inputs);
    }
}

pub fn run_suite(name: &str, seed: u64, trials: usize) -> Result<VerificationReport, SuiteError> {
    run_suite_with_tol(name, seed, trials, DEFAULT_TOL)
}

/// As [`run_suite`] with an explicit tolerance for the numerical suites.
/// The tensor and quadruple suites keep their own fixed tolerances.
pub fn run_suite_with_tol(name: &str, seed: u64, trials: usize, tol: f64) -> Result<VerificationReport, SuiteError> {
    let suite: fn(&mut Recorder, u64, usize) = match name {
        "galois" => galois_suite,
        "orthomodular" => orthomodular_suite,
        "sasaki" => sasaki_suite,
        "tensor-iso" => tensor_suite,
        "quadruple" => quadruple_suite,
        "cascade-born" => cascade_suite,
        "prop2" => prop2_suite,
        "quantale" => quantale_suite,
        other => return Err(SuiteError::UnknownSuite(other.to_owned())),
    };
    let start = Instant::now();
    let mut rec = Recorder::new(tol);
    suite(&mut rec, seed, trials);
    Ok(VerificationReport {
        suite: name.to_owned(),
        trials,
        failures: rec.failures,
        max_discrepancy: rec.max,
        seed,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn rngs(seed: u64, trials: usize) -> impl Iterator<Item = (usize, Rng)> {
    (0..trials).map(move |i| (i, trial_rng(seed, i as u64)))
}

fn pick<'a, T>(rng: &mut Rng, xs: &'a [T]) -> &'a T {
    &xs[random::usize_in(rng, 0, xs.len() - 1)]
}

fn subspace_json(s: &Subspace) -> Value {
    json!(MatrixJson::from_matrix(s.frame()))
}

/// The four small lattices used for exhaustive checks.
pub fn small_lattices() -> Vec<(&'static str, Arc<FiniteLattice>)> {
    vec![
        ("2-chain", Arc::new(FiniteLattice::chain(2))),
        ("3-chain", Arc::new(FiniteLattice::chain(3))),
        ("B2", Arc::new(FiniteLattice::boolean2())),
        ("MO2", Arc::new(FiniteLattice::mo2())),
    ]
}

/// Exact Galois laws for one map: the adjunction on all pairs and the
/// round trip through the dual.
pub fn galois_laws_hold(f: &JoinMap) -> (bool, bool) {
    let dual = galois_dual(f);
    let (l1, l2) = (f.source(), f.target());
    let adjunction = l1
        .elements()
        .all(|a| l2.elements().all(|b| l1.leq(a, dual.apply(b)) == l2.leq(f.apply(a), b)));
    let round_trip = adjoint_of_meetmap(&dual) == *f;
    (adjunction, round_trip)
}

fn galois_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    if trials == 0 {
        return;
    }
    let lattices = small_lattices();
    let mut qs: Vec<(String, QLattice)> = Vec::new();
    for (n1, l1) in &lattices {
        for (n2, l2) in &lattices {
            let q = enumerate_q(l1, l2).expect("small lattices enumerate");
            qs.push((format!("{n1} -> {n2}"), q));
        }
    }
    for (t, mut rng) in rngs(seed, trials) {
        let (pair, q) = pick(&mut rng, &qs);
        let f = pick(&mut rng, q.maps());
        let g = pick(&mut rng, q.maps());
        let inputs = || json!({ "trial": t, "pair": pair, "f": f.table(), "g": g.table() });
        let (adjunction, round_trip) = galois_laws_hold(f);
        rec.holds("adjunction", adjunction, inputs);
        rec.holds("round-trip", round_trip, inputs);
        let antitone = f.leq(g).unwrap() == g.dual().leq(&f.dual()).unwrap();
        rec.holds("antitone", antitone, inputs);
        let joined = pointwise_join(q.source(), q.target(), &[f.clone(), g.clone()]).unwrap();
        let meet = pointwise_meet(q.target(), q.source(), &[f.dual(), g.dual()]).unwrap();
        rec.holds("dual-of-join", galois_dual(&joined) == meet, inputs);
        rec.holds("join-in-q", q.index_of(&joined).is_some(), inputs);
    }
}

/// Random `b ⊇ a`, sometimes all of `C^n`.
fn superspace(rng: &mut Rng, a: &Subspace) -> Subspace {
    let extra = random::any_subspace(rng, a.ambient_dim());
    a.join(&extra).expect("same ambient space")
}

/// Random subspace that often meets `a` nontrivially.
fn overlapping(rng: &mut Rng, a: &Subspace) -> Subspace {
    let n = a.ambient_dim();
    let b = random::any_subspace(rng, n);
    if random::coin(rng) && !a.is_zero() {
        let k = random::usize_in(rng, 1, a.rank());
        let inner = random::frame(rng, a.rank(), k);
        let shared = Subspace::span(&(a.frame() * inner), DEFAULT_TOL).expect("finite frame");
        b.join(&shared).expect("same ambient space")
    } else {
        b
    }
}

fn orthomodular_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    for (t, mut rng) in rngs(seed, trials) {
        let n = 2 + t % 3;
        let a = random::any_subspace(&mut rng, n);
        let b = overlapping(&mut rng, &a);
        let big = superspace(&mut rng, &a);
        let inputs = || json!({ "trial": t, "a": subspace_json(&a), "b": subspace_json(&b), "b_above_a": subspace_json(&big) });

        let rebuilt = a.join(&big.meet(&a.ortho()).unwrap()).unwrap();
        rec.check("orthomodular", big.distance(&rebuilt), inputs);
        rec.check("double-complement", a.ortho().ortho().distance(&a), inputs);
        let lhs = a.meet(&b).unwrap().ortho();
        let rhs = a.ortho().join(&b.ortho()).unwrap();
        rec.check("de-morgan-meet", lhs.distance(&rhs), inputs);
        let lhs = a.join(&b).unwrap().ortho();
        let rhs = a.ortho().meet(&b.ortho()).unwrap();
        rec.check("de-morgan-join", lhs.distance(&rhs), inputs);
        rec.check("complement-meet", a.meet(&a.ortho()).unwrap().rank() as f64, inputs);
    }
}

fn sasaki_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    for (t, mut rng) in rngs(seed, trials) {
        let n = 2 + t % 3;
        let a = random::any_subspace(&mut rng, n);
        let b = overlapping(&mut rng, &a);
        let inputs = || json!({ "trial": t, "a": subspace_json(&a), "b": subspace_json(&b) });
        let (s, d) = a.sasaki_with_discrepancy(&b).unwrap();
        rec.check("formula-vs-projection", d, inputs);
        rec.check("below-a", s.inclusion_defect(&a), inputs);
        // φ_a is the identity below a.
        let below = a.meet(&b).unwrap();
        let (fixed, _) = a.sasaki_with_discrepancy(&below).unwrap();
        rec.check("fixes-below", fixed.distance(&below), inputs);
        // φ_{a'} φ_a = φ_{a'} for a' ⊆ a.
        let sub = overlapping(&mut rng, &a).meet(&a).unwrap();
        let (direct, _) = sub.sasaki_with_discrepancy(&b).unwrap();
        let (twice, _) = sub.sasaki_with_discrepancy(&s).unwrap();
        rec.check("foulis", direct.distance(&twice), inputs);
    }
}

fn tensor_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    for (t, mut rng) in rngs(seed, trials) {
        let m = random::usize_in(&mut rng, 1, 8);
        let n1 = random::usize_in(&mut rng, m, 8);
        let n2 = random::usize_in(&mut rng, m, 8);
        let tv = TensorVector::random(&mut rng, m, n1, n2);
        let inputs = || json!({ "trial": t, "tv": TensorJson::from_tensor_vector(&tv) });
        for lin in [Linearity::Linear, Linearity::Antilinear] {
            let f = from_tensor(&tv, lin);
            rec.check_at("hs-norm", (f.hs_norm() - tv.norm()).abs(), TENSOR_TOL, inputs);
            let back = to_tensor(&f, tv.left_basis(), tv.right_basis());
            let d = back.map_or(f64::INFINITY, |b| (b.coefficients() - tv.coefficients()).norm());
            rec.check_at("round-trip", d, TENSOR_TOL, inputs);
            // Only the anti-linear correspondence is independent of the
            // chosen decomposition, so compare operators rather than vectors.
            let resummed = from_tensor(&schmidt(&f), lin);
            rec.check_at("schmidt", (resummed.matrix() - f.matrix()).norm(), TENSOR_TOL, inputs);
            if lin == Linearity::Antilinear {
                rec.check_at("schmidt-vector", schmidt(&f).distance(&tv), TENSOR_TOL, inputs);
            }
        }
    }
}

fn random_operator(rng: &mut Rng) -> CompoundOperator {
    let n1 = random::usize_in(rng, 1, 4);
    let n2 = random::usize_in(rng, 1, 4);
    // Random rank so that degenerate reduced states are exercised too.
    let r = random::usize_in(rng, 1, n1.min(n2));
    let m = random::matrix(rng, n2, r) * random::matrix(rng, r, n1);
    let lin = if random::coin(rng) { Linearity::Linear } else { Linearity::Antilinear };
    CompoundOperator::new(m, lin).expect("finite matrix")
}

fn quadruple_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    for (t, mut rng) in rngs(seed, trials) {
        let f = random_operator(&mut rng);
        let inputs = || json!({ "trial": t, "operator": MatrixJson::from_operator(&f) });
        let q = match f.quadruple() {
            Ok(q) => q,
            Err(e) => {
                rec.failures.push(Failure { law: format!("quadruple: {e}"), inputs: inputs(), discrepancy: f64::INFINITY });
                rec.max = f64::INFINITY;
                continue;
            }
        };
        for (side, rho) in [("rho1", &q.rho1), ("rho2", &q.rho2)] {
            rec.check_at(&format!("{side}-hermitian"), rho.hermiticity_defect(), HERMITIAN_TOL, inputs);
            rec.check_at(&format!("{side}-positive"), (-rho.min_eigenvalue()).max(0.0), PSD_TOL, inputs);
            rec.check_at(&format!("{side}-trace"), (rho.trace() - 1.0).abs(), TRACE_TOL, inputs);
        }
        let adjoint_defect = (q.backward.matrix() - f.adjoint().matrix()).norm();
        rec.check("backward-is-adjoint", adjoint_defect, inputs);
    }
}

/// Outcome of one cascade-versus-Born comparison.
#[derive(Debug, Clone, Copy)]
pub struct BornComparison {
    pub cascade: f64,
    pub born: f64,
    pub reversed: f64,
    /// Sum of joint probabilities over a product basis.
    pub completeness: f64,
    pub chains_ok: bool,
}

/// Runs both cascades for `ψ ⊗ φ` and the full product basis `u1 ⊗ u2`.
pub fn compare_cascade_with_born(
    tv: &TensorVector,
    psi: &crate::hilbert::CVector,
    phi: &crate::hilbert::CVector,
    u1: &crate::hilbert::CMatrix,
    u2: &crate::hilbert::CMatrix,
) -> Result<BornComparison, crate::cascade::CascadeError> {
    let f = from_tensor(tv, Linearity::Antilinear);
    let (left, right) = (Subspace::ray(psi), Subspace::ray(phi));
    let forward = run_cascade_ordered(&f, &left, &right, Order::LeftFirst)?;
    let backward = run_cascade_ordered(&f, &left, &right, Order::RightFirst)?;
    let mut chains_ok = chain_order_check(&forward) && chain_order_check(&backward);
    let mut completeness = 0.0;
    for i in 0..u1.ncols() {
        let l = Subspace::ray(&u1.column(i).into_owned());
        for j in 0..u2.ncols() {
            let r = Subspace::ray(&u2.column(j).into_owned());
            let trace = run_cascade_ordered(&f, &l, &r, Order::LeftFirst)?;
            chains_ok &= chain_order_check(&trace);
            completeness += trace.joint_probability;
        }
    }
    Ok(BornComparison {
        cascade: forward.joint_probability,
        born: born_probability(tv, psi, phi)?,
        reversed: backward.joint_probability,
        completeness,
        chains_ok,
    })
}

fn cascade_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    cascade_trials(rec, seed, trials, |rng| (random::usize_in(rng, 2, 4), random::usize_in(rng, 2, 4)));
}

fn cascade_trials(rec: &mut Recorder, seed: u64, trials: usize, dims: impl Fn(&mut Rng) -> (usize, usize)) {
    for (t, mut rng) in rngs(seed, trials) {
        let (n1, n2) = dims(&mut rng);
        let m = random::usize_in(&mut rng, 1, n1.min(n2));
        let tv = TensorVector::random(&mut rng, m, n1, n2);
        let psi = random::vector(&mut rng, n1);
        let phi = random::vector(&mut rng, n2);
        let u1 = random::unitary(&mut rng, n1);
        let u2 = random::unitary(&mut rng, n2);
        let inputs = || {
            json!({
                "trial": t,
                "tv": TensorJson::from_tensor_vector(&tv),
                "psi": VectorJson::from_vector(&psi),
                "phi": VectorJson::from_vector(&phi),
            })
        };
        match compare_cascade_with_born(&tv, &psi, &phi, &u1, &u2) {
            Ok(c) => {
                rec.check("cascade-equals-born", (c.cascade - c.born).abs(), inputs);
                rec.check("order-independence", (c.cascade - c.reversed).abs(), inputs);
                rec.check("completeness", (c.completeness - 1.0).abs(), inputs);
                rec.holds("descending-chain", c.chains_ok, inputs);
            }
            Err(e) => {
                rec.failures.push(Failure { law: format!("cascade: {e}"), inputs: inputs(), discrepancy: f64::INFINITY });
                rec.max = f64::INFINITY;
            }
        }
    }
}

fn prop2_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    prop2_trials(rec, seed, trials, |t| 2 + t % 3);
}

fn prop2_trials(rec: &mut Recorder, seed: u64, trials: usize, dim_of: impl Fn(usize) -> usize) {
    for (t, mut rng) in rngs(seed, trials) {
        let dim = dim_of(t);
        let report = check_prop2(dim, 1, &mut rng).expect("dimension in range");
        for (law, d) in [
            ("fixed-point", report.fixed_point_max),
            ("compatibility", report.compatibility_max),
            ("composition", report.composition_max),
            ("sasaki-bridge", report.sasaki_bridge_max),
        ] {
            rec.check(law, d, || json!({ "trial": t, "dim": dim, "seed": seed }));
        }
    }
}

/// Cascade campaign with both parts of dimension `dim` (2 to 4): the
/// cascade-versus-Born comparisons followed by the Lüders hypotheses.
pub fn verify_cascade(dim: usize, seed: u64, trials: usize, tol: f64) -> Result<VerificationReport, CascadeError> {
    if !(2..=4).contains(&dim) {
        return Err(CascadeError::UnsupportedDimension(dim));
    }
    let start = Instant::now();
    let mut rec = Recorder::new(tol);
    cascade_trials(&mut rec, seed, trials, |_| (dim, dim));
    prop2_trials(&mut rec, seed ^ 0x9e37_79b9_7f4a_7c15, trials, |_| dim);
    Ok(VerificationReport {
        suite: format!("cascade-d{dim}"),
        trials,
        failures: rec.failures,
        max_discrepancy: rec.max,
        seed,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// The two fixed state spaces of the quantale suite.
pub fn sample_spaces() -> Vec<Arc<ProperStateSpace>> {
    let two = ProperStateSpace::new(
        vec!["up".into(), "down".into()],
        Arc::new(FiniteLattice::chain(2)),
        vec![1, 1],
    );
    let three = ProperStateSpace::new(
        vec!["p0".into(), "p1".into(), "p2".into()],
        Arc::new(FiniteLattice::chain(3)),
        vec![1, 2, 2],
    );
    vec![Arc::new(two.expect("valid space")), Arc::new(three.expect("valid space"))]
}

fn quantale_suite(rec: &mut Recorder, seed: u64, trials: usize) {
    if trials == 0 {
        return;
    }
    let spaces: Vec<(Arc<ProperStateSpace>, Vec<TransitionMap>)> = sample_spaces()
        .into_iter()
        .map(|s| {
            let members = enumerate_members(&s).expect("small space");
            (s, members)
        })
        .collect();
    for (t, mut rng) in rngs(seed, trials) {
        let (space, members) = pick(&mut rng, &spaces);
        let f = pick(&mut rng, members);
        let g = pick(&mut rng, members);
        let h = pick(&mut rng, members);
        let inputs = || json!({ "trial": t, "states": space.len(), "f": f.images(), "g": g.images(), "h": h.images() });
        let fg = compose(f, g).unwrap();
        rec.holds("closed-under-composition", is_member(&fg), inputs);
        let assoc = compose(&fg, h).unwrap() == compose(f, &compose(g, h).unwrap()).unwrap();
        rec.holds("associativity", assoc, inputs);
        let gh = union_join(space, &[g.clone(), h.clone()]).unwrap();
        let left = compose(f, &gh).unwrap() == union_join(space, &[fg.clone(), compose(f, h).unwrap()]).unwrap();
        rec.holds("left-distributivity", left, inputs);

        let pf = property_propagation(f).unwrap().map;
        let pg = property_propagation(g).unwrap().map;
        let composed = property_propagation(&fg).unwrap().map;
        rec.holds("epimorphism-composition", composed == pf.compose(&pg).unwrap(), inputs);
        let sub = space.property_sublattice();
        let joined = property_propagation(&union_join(space, &[f.clone(), g.clone()]).unwrap()).unwrap().map;
        rec.holds("epimorphism-join", joined == pointwise_join(sub, sub, &[pf, pg]).unwrap(), inputs);
    }
}
