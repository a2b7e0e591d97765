//! Acceptance criteria. Runs as a plain binary so that every criterion
//! prints exactly one PASS or FAIL line, with its runtime budget enforced.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qcompound::cascade::check_prop2;
use qcompound::compound::{atomicity_probe, CompoundOperator, Linearity};
use qcompound::galois::{
    absurd_state, adjoint_of_meetmap, enumerate_q, galois_dual, order_antitone_check, pointwise_join,
    pointwise_meet, separation_state, JoinMap,
};
use qcompound::hilbert::c;
use qcompound::lattice::{Element, FiniteLattice};
use qcompound::quantale::{enumerate_members, epimorphism_check, quantale_laws};
use qcompound::random;
use qcompound::suite::{run_suite, sample_spaces, small_lattices};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Result<String, String>,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "Galois adjunction and round trip", budget: secs(5), run: galois_adjunction },
        Criterion { id: 2, name: "Q(L1, L2) structure and sizes", budget: secs(5), run: q_structure },
        Criterion { id: 3, name: "duality is antitone and turns joins into meets", budget: secs(5), run: duality },
        Criterion { id: 4, name: "Hilbert lattice laws", budget: secs(30), run: hilbert_laws },
        Criterion { id: 5, name: "tensor isomorphism", budget: secs(5), run: tensor_iso },
        Criterion { id: 6, name: "quadruple validity", budget: secs(10), run: quadruples },
        Criterion { id: 7, name: "cascade equals Born", budget: secs(30), run: cascade_born },
        Criterion { id: 8, name: "Lüders hypotheses and Sasaki bridge", budget: secs(30), run: prop2 },
        Criterion { id: 9, name: "quantale laws and epimorphism", budget: secs(30), run: quantale },
        Criterion { id: 10, name: "atomicity probe", budget: secs(10), run: probe },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= c.budget => Ok(detail),
            Ok(detail) => Err(format!("{detail}; over budget of {:?}", c.budget)),
            Err(e) => Err(e),
        };
        match verdict {
            Ok(detail) => println!("PASS [{:>2}] {} ({detail}; {:.2?})", c.id, c.name, elapsed),
            Err(e) => {
                failed += 1;
                println!("FAIL [{:>2}] {} ({e}; {:.2?})", c.id, c.name, elapsed);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// Brute-force oracles, written against the order relation only.

fn oracle_join(l: &FiniteLattice, a: Element, b: Element) -> Element {
    let upper: Vec<Element> = l.elements().filter(|&u| l.leq(a, u) && l.leq(b, u)).collect();
    *upper
        .iter()
        .find(|&&u| upper.iter().all(|&v| l.leq(u, v)))
        .expect("lattice has joins")
}

fn oracle_bottom(l: &FiniteLattice) -> Element {
    l.elements().find(|&x| l.elements().all(|y| l.leq(x, y))).unwrap()
}

/// Every table `L1 → L2` that preserves binary joins and bottom.
fn oracle_join_maps(l1: &FiniteLattice, l2: &FiniteLattice) -> Vec<Vec<Element>> {
    let (n1, n2) = (l1.len(), l2.len());
    let mut out = Vec::new();
    let mut table = vec![0; n1];
    for code in 0..n2.pow(n1 as u32) {
        let mut rest = code;
        for slot in table.iter_mut() {
            *slot = rest % n2;
            rest /= n2;
        }
        let keeps_bottom = table[oracle_bottom(l1)] == oracle_bottom(l2);
        let keeps_joins = l1
            .elements()
            .all(|a| l1.elements().all(|b| table[oracle_join(l1, a, b)] == oracle_join(l2, table[a], table[b])));
        if keeps_bottom && keeps_joins {
            out.push(table.clone());
        }
    }
    out.sort();
    out
}

fn all_q() -> Vec<(String, qcompound::QLattice)> {
    let lattices = small_lattices();
    let mut out = Vec::new();
    for (n1, l1) in &lattices {
        for (n2, l2) in &lattices {
            out.push((format!("{n1}->{n2}"), enumerate_q(l1, l2).expect("small lattices")));
        }
    }
    out
}

fn galois_adjunction() -> Result<String, String> {
    let mut maps = 0;
    for (pair, q) in all_q() {
        let (l1, l2) = (q.source(), q.target());
        for f in q.maps() {
            maps += 1;
            let dual = galois_dual(f);
            for a in l1.elements() {
                for b in l2.elements() {
                    ensure(l1.leq(a, dual.apply(b)) == l2.leq(f.apply(a), b), || {
                        format!("{pair}: adjunction fails for {:?} at ({a}, {b})", f.table())
                    })?;
                }
            }
            ensure(adjoint_of_meetmap(&dual) == *f, || format!("{pair}: round trip fails for {:?}", f.table()))?;
        }
    }
    Ok(format!("{maps} maps over 16 lattice pairs"))
}

fn q_structure() -> Result<String, String> {
    for (pair, q) in all_q() {
        let (l1, l2) = (q.source(), q.target());
        let tables: Vec<Vec<Element>> = q.maps().iter().map(|f| f.table().to_vec()).collect();
        let oracle = oracle_join_maps(l1, l2);
        ensure(tables == oracle, || format!("{pair}: {} maps, brute force finds {}", tables.len(), oracle.len()))?;
        ensure(*q.top() == separation_state(l1, l2), || format!("{pair}: top is not the separation state"))?;
        ensure(*q.bottom() == absurd_state(l1, l2), || format!("{pair}: bottom is not the absurd state"))?;
        // Joins in Q are pointwise.
        for f in q.maps() {
            for g in q.maps() {
                let pw = pointwise_join(l1, l2, &[f.clone(), g.clone()]).unwrap();
                ensure(q.join(f, g) == Some(&pw), || format!("{pair}: join of {f:?} and {g:?} is not pointwise"))?;
            }
        }
    }
    let size = |l1: FiniteLattice, l2: FiniteLattice| enumerate_q(&Arc::new(l1), &Arc::new(l2)).unwrap().len();
    let c2c2 = size(FiniteLattice::chain(2), FiniteLattice::chain(2));
    let b2c2 = size(FiniteLattice::boolean2(), FiniteLattice::chain(2));
    ensure(c2c2 == 2 && b2c2 == 4, || format!("|Q(2,2)| = {c2c2}, |Q(B2,2)| = {b2c2}"))?;
    Ok("|Q(2-chain,2-chain)| = 2, |Q(B2,2-chain)| = 4, 16 pairs match brute force".into())
}

fn duality() -> Result<String, String> {
    let mut pairs = 0;
    for (pair, q) in all_q() {
        let (l1, l2) = (q.source(), q.target());
        for f in q.maps() {
            for g in q.maps() {
                pairs += 1;
                ensure(order_antitone_check(f, g).unwrap(), || format!("{pair}: antitone law fails for {f:?}, {g:?}"))?;
                let joined = pointwise_join(l1, l2, &[f.clone(), g.clone()]).unwrap();
                let meet = pointwise_meet(l2, l1, &[f.dual(), g.dual()]).unwrap();
                ensure(galois_dual(&joined) == meet, || format!("{pair}: dual of {f:?} ∨ {g:?}"))?;
            }
        }
        let all: Vec<JoinMap> = q.maps().to_vec();
        let duals: Vec<_> = all.iter().map(JoinMap::dual).collect();
        let whole = galois_dual(&pointwise_join(l1, l2, &all).unwrap());
        ensure(whole == pointwise_meet(l2, l1, &duals).unwrap(), || format!("{pair}: join of all maps"))?;
        let empty = galois_dual(&pointwise_join(l1, l2, &[]).unwrap());
        ensure(empty == pointwise_meet(l2, l1, &[]).unwrap(), || format!("{pair}: empty join"))?;
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn hilbert_laws() -> Result<String, String> {
    let mut worst = 0f64;
    for name in ["orthomodular", "sasaki"] {
        // Dimensions cycle through 2, 3, 4: 1000 instances each.
        let r = run_suite(name, SEED, 3000).unwrap();
        worst = worst.max(r.max_discrepancy);
        ensure(r.passed() && r.max_discrepancy <= 1e-9, || {
            format!("{name}: {} failures, max {:e}", r.failures.len(), r.max_discrepancy)
        })?;
    }
    Ok(format!("1000 instances per dimension, max discrepancy {worst:.1e}"))
}

fn tensor_iso() -> Result<String, String> {
    let r = run_suite("tensor-iso", SEED, 1000).unwrap();
    ensure(r.passed(), || format!("{} failures, max {:e}", r.failures.len(), r.max_discrepancy))?;
    Ok(format!("1000 vectors, m <= 8, max discrepancy {:.1e}", r.max_discrepancy))
}

fn quadruples() -> Result<String, String> {
    let r = run_suite("quadruple", SEED, 1000).unwrap();
    ensure(r.passed(), || format!("{} failures: {:?}", r.failures.len(), r.failures.first().map(|f| &f.law)))?;
    Ok(format!("1000 operators, max defect {:.1e}", r.max_discrepancy))
}

fn cascade_born() -> Result<String, String> {
    let r = run_suite("cascade-born", SEED, 600).unwrap();
    ensure(r.passed() && r.max_discrepancy <= 1e-9, || {
        format!("{} failures: {:?}", r.failures.len(), r.failures.first().map(|f| &f.law))
    })?;
    Ok(format!("600 instances, max discrepancy {:.1e}", r.max_discrepancy))
}

fn prop2() -> Result<String, String> {
    let mut worst = 0f64;
    for dim in [2, 3] {
        let mut rng = random::seeded(SEED + dim as u64);
        let r = check_prop2(dim, 600, &mut rng).map_err(|e| e.to_string())?;
        let max = r.fixed_point_max.max(r.compatibility_max).max(r.composition_max).max(r.sasaki_bridge_max);
        worst = worst.max(max);
        ensure(r.passed() && max <= 1e-9, || format!("dim {dim}: {:?}", r.counterexamples.first()))?;
    }
    Ok(format!("600 instances per dimension, max discrepancy {worst:.1e}"))
}

fn quantale() -> Result<String, String> {
    let mut sizes = Vec::new();
    for space in sample_spaces() {
        let members = enumerate_members(&space).map_err(|e| e.to_string())?;
        let laws = quantale_laws(&space, &members).map_err(|e| e.to_string())?;
        ensure(laws.passed(), || format!("{}-state space: {laws:?}", space.len()))?;
        let epi = epimorphism_check(&space, &members).map_err(|e| e.to_string())?;
        ensure(epi.passed(), || format!("{}-state space: {:?}", space.len(), epi.failures.first()))?;
        sizes.push(format!("{} states: {} members", space.len(), members.len()));
    }
    Ok(sizes.join(", "))
}

fn probe() -> Result<String, String> {
    let mut rng = random::seeded(SEED);
    let mut kinds = [0usize; 3];
    for i in 0..300 {
        let n1 = random::usize_in(&mut rng, 2, 4);
        let n2 = random::usize_in(&mut rng, 2, 4);
        let lin = if random::coin(&mut rng) { Linearity::Linear } else { Linearity::Antilinear };
        let g = CompoundOperator::new(random::matrix(&mut rng, n2, n1), lin).unwrap();
        // Pairs with f ≤ g: a nonzero multiple of g, or zero. The third
        // kind is an unrelated pair, where the order must fail on a sample.
        let f = match i % 3 {
            0 => {
                let z = c(random::gaussian(&mut rng), random::gaussian(&mut rng));
                CompoundOperator::new(g.matrix() * z, lin).unwrap()
            }
            1 => CompoundOperator::zero(n1, n2, lin),
            _ => CompoundOperator::new(random::matrix(&mut rng, n2, n1), lin).unwrap(),
        };
        let report = atomicity_probe(&f, &g, 200, &mut rng).map_err(|e| e.to_string())?;
        ensure(report.consistent_with_prop1, || format!("pair {i}: {report:?}"))?;
        let expected = match i % 3 {
            0 => report.order_holds && report.equal_on_samples,
            1 => report.order_holds && report.f_is_zero,
            _ => !report.order_holds,
        };
        ensure(expected, || format!("pair {i} of kind {}: {report:?}", i % 3))?;
        kinds[i % 3] += 1;
    }
    Ok(format!(
        "{} multiples, {} zero maps, {} unrelated pairs, 200 rays each",
        kinds[0], kinds[1], kinds[2]
    ))
}
