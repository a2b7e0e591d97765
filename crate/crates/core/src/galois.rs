//! Join-preserving maps between finite lattices and their Galois duals.
//!
//! A [`JoinMap`] `f: L1 → L2` is a state of compoundness: it sends a property
//! of the first system to the strongest property of the second whose
//! actuality it induces. Its dual [`MeetMap`] `f*: L2 → L1` sends a property
//! to its weakest cause, with `a ≤ f*(b) ⟺ f(a) ≤ b`. All join maps between
//! two finite lattices form the complete lattice [`QLattice`], whose join is
//! pointwise, whose top is the separation state and whose bottom is the
//! absurd state.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{Element, FiniteLattice, LatticeError};

/// Largest lattice accepted on either side of [`enumerate_q`].
pub const ENUMERATION_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("table has length {got}, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("table entry {0} is not an element of the target lattice")]
    UnknownElement(Element),
    #[error("map does not preserve joins ({0})")]
    NotJoinPreserving(String),
    #[error("map does not preserve meets ({0})")]
    NotMeetPreserving(String),
    #[error("maps do not share source and target lattices")]
    MixedSignatures,
    #[error("lattices of sizes {0} and {1} exceed the enumeration limit of {ENUMERATION_LIMIT}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn check_table(table: &[Element], source: &FiniteLattice, target: &FiniteLattice) -> Result<(), GaloisError> {
    if table.len() != source.len() {
        return Err(GaloisError::TableLength { expected: source.len(), got: table.len() });
    }
    if let Some(&bad) = table.iter().find(|&&x| x >= target.len()) {
        return Err(GaloisError::UnknownElement(bad));
    }
    Ok(())
}

fn join_violation(table: &[Element], source: &FiniteLattice, target: &FiniteLattice) -> Option<String> {
    if table[source.bottom()] != target.bottom() {
        return Some("bottom is not sent to bottom".into());
    }
    for x in source.elements() {
        for y in (x + 1)..source.len() {
            if table[source.join2(x, y)] != target.join2(table[x], table[y]) {
                return Some(format!("f({x} ∨ {y}) ≠ f({x}) ∨ f({y})"));
            }
        }
    }
    None
}

fn meet_violation(table: &[Element], source: &FiniteLattice, target: &FiniteLattice) -> Option<String> {
    if table[source.top()] != target.top() {
        return Some("top is not sent to top".into());
    }
    for x in source.elements() {
        for y in (x + 1)..source.len() {
            if table[source.meet2(x, y)] != target.meet2(table[x], table[y]) {
                return Some(format!("g({x} ∧ {y}) ≠ g({x}) ∧ g({y})"));
            }
        }
    }
    None
}

/// Whether `table` preserves the bottom and all binary joins, which in a
/// finite lattice is the same as preserving all joins.
pub fn is_join_preserving(table: &[Element], source: &FiniteLattice, target: &FiniteLattice) -> bool {
    check_table(table, source, target).is_ok() && join_violation(table, source, target).is_none()
}

fn same_lattice(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A join-preserving map between finite lattices.
#[derive(Clone, PartialEq, Eq)]
pub struct JoinMap {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    table: Vec<Element>,
}

impl fmt::Debug for JoinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JoinMap{:?}", self.table)
    }
}

impl JoinMap {
    pub fn new(
        source: Arc<FiniteLattice>,
        target: Arc<FiniteLattice>,
        table: Vec<Element>,
    ) -> Result<Self, GaloisError> {
        check_table(&table, &source, &target)?;
        if let Some(why) = join_violation(&table, &source, &target) {
            return Err(GaloisError::NotJoinPreserving(why));
        }
        Ok(Self { source, target, table })
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let table = lattice.elements().collect();
        Self { source: lattice.clone(), target: lattice, table }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn apply(&self, a: Element) -> Element {
        self.table[a]
    }

    pub fn same_signature(&self, other: &Self) -> bool {
        same_lattice(&self.source, &other.source) && same_lattice(&self.target, &other.target)
    }

    /// Pointwise order `f ≤ g`.
    pub fn leq(&self, other: &Self) -> Result<bool, GaloisError> {
        if !self.same_signature(other) {
            return Err(GaloisError::MixedSignatures);
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .all(|(&a, &b)| self.target.leq(a, b)))
    }

    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, GaloisError> {
        if !same_lattice(&inner.target, &self.source) {
            return Err(GaloisError::MixedSignatures);
        }
        let table = inner.table.iter().map(|&x| self.table[x]).collect();
        Ok(Self { source: inner.source.clone(), target: self.target.clone(), table })
    }

    pub fn dual(&self) -> MeetMap {
        galois_dual(self)
    }
}

/// A meet-preserving map, including the empty meet (`top ↦ top`).
#[derive(Clone, PartialEq, Eq)]
pub struct MeetMap {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    table: Vec<Element>,
}

impl fmt::Debug for MeetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeetMap{:?}", self.table)
    }
}

impl MeetMap {
    pub fn new(
        source: Arc<FiniteLattice>,
        target: Arc<FiniteLattice>,
        table: Vec<Element>,
    ) -> Result<Self, GaloisError> {
        check_table(&table, &source, &target)?;
        if let Some(why) = meet_violation(&table, &source, &target) {
            return Err(GaloisError::NotMeetPreserving(why));
        }
        Ok(Self { source, target, table })
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn apply(&self, b: Element) -> Element {
        self.table[b]
    }

    pub fn leq(&self, other: &Self) -> Result<bool, GaloisError> {
        if !(same_lattice(&self.source, &other.source) && same_lattice(&self.target, &other.target)) {
            return Err(GaloisError::MixedSignatures);
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .all(|(&a, &b)| self.target.leq(a, b)))
    }

    pub fn adjoint(&self) -> JoinMap {
        adjoint_of_meetmap(self)
    }
}

/// `f*(b) = ∨{a | f(a) ≤ b}`.
pub fn galois_dual(f: &JoinMap) -> MeetMap {
    let (l1, l2) = (&f.source, &f.target);
    let table = l2
        .elements()
        .map(|b| {
            l1.join(l1.elements().filter(|&a| l2.leq(f.table[a], b)))
                .expect("indices are in range")
        })
        .collect();
    MeetMap { source: l2.clone(), target: l1.clone(), table }
}

/// The join-preserving map `f(a) = min{b | a ≤ g(b)}` adjoint to `g`.
pub fn adjoint_of_meetmap(g: &MeetMap) -> JoinMap {
    let (l2, l1) = (&g.source, &g.target);
    let table = l1
        .elements()
        .map(|a| {
            l2.meet(l2.elements().filter(|&b| l1.leq(a, g.table[b])))
                .expect("indices are in range")
        })
        .collect();
    JoinMap { source: l1.clone(), target: l2.clone(), table }
}

/// Validates a raw table as a meet map and returns its adjoint.
pub fn adjoint_of_table(
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    table: Vec<Element>,
) -> Result<JoinMap, GaloisError> {
    Ok(adjoint_of_meetmap(&MeetMap::new(source, target, table)?))
}

/// Pointwise join; the empty join is the absurd state.
pub fn pointwise_join(
    source: &Arc<FiniteLattice>,
    target: &Arc<FiniteLattice>,
    fs: &[JoinMap],
) -> Result<JoinMap, GaloisError> {
    let mut table = vec![target.bottom(); source.len()];
    for f in fs {
        if !(same_lattice(&f.source, source) && same_lattice(&f.target, target)) {
            return Err(GaloisError::MixedSignatures);
        }
        for (t, &x) in table.iter_mut().zip(&f.table) {
            *t = target.join2(*t, x);
        }
    }
    Ok(JoinMap { source: source.clone(), target: target.clone(), table })
}

/// Pointwise meet of meet maps `L2 → L1`; the empty meet is constant top.
pub fn pointwise_meet(
    source: &Arc<FiniteLattice>,
    target: &Arc<FiniteLattice>,
    gs: &[MeetMap],
) -> Result<MeetMap, GaloisError> {
    let mut table = vec![target.top(); source.len()];
    for g in gs {
        if !(same_lattice(&g.source, source) && same_lattice(&g.target, target)) {
            return Err(GaloisError::MixedSignatures);
        }
        for (t, &x) in table.iter_mut().zip(&g.table) {
            *t = target.meet2(*t, x);
        }
    }
    Ok(MeetMap { source: source.clone(), target: target.clone(), table })
}

/// Top of `Q(L1, L2)`: bottom to bottom, everything else to top.
pub fn separation_state(l1: &Arc<FiniteLattice>, l2: &Arc<FiniteLattice>) -> JoinMap {
    let table = l1
        .elements()
        .map(|a| if a == l1.bottom() { l2.bottom() } else { l2.top() })
        .collect();
    JoinMap { source: l1.clone(), target: l2.clone(), table }
}

/// Bottom of `Q(L1, L2)`: constant bottom.
pub fn absurd_state(l1: &Arc<FiniteLattice>, l2: &Arc<FiniteLattice>) -> JoinMap {
    JoinMap { source: l1.clone(), target: l2.clone(), table: vec![l2.bottom(); l1.len()] }
}

/// Checks `(f ≤ g) ⟺ (g* ≤ f*)`.
pub fn order_antitone_check(f: &JoinMap, g: &JoinMap) -> Result<bool, GaloisError> {
    let forward = f.leq(g)?;
    let backward = g.dual().leq(&f.dual())?;
    Ok(forward == backward)
}

/// Evolution type of a state of compoundness. The two flags are not
/// exclusive; [`Classification::label`] picks one by priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// Every atom goes to an atom or to bottom.
    pub atomistic: bool,
    /// The map is the separation state.
    pub separation_like: bool,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        if self.atomistic {
            "atomistic"
        } else if self.separation_like {
            "separation-like"
        } else {
            "other"
        }
    }
}

pub fn classify_map(f: &JoinMap) -> Classification {
    let target_atoms = f.target.atoms();
    let atomistic = f.source.atoms().iter().all(|&a| {
        let img = f.table[a];
        img == f.target.bottom() || target_atoms.contains(&img)
    });
    let separation_like = f.table == separation_state(&f.source, &f.target).table;
    Classification { atomistic, separation_like }
}

/// All join maps `L1 → L2`, ordered pointwise, as a validated lattice.
#[derive(Debug, Clone)]
pub struct QLattice {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    maps: Vec<JoinMap>,
    lattice: FiniteLattice,
    index: HashMap<Vec<Element>, usize>,
}

impl QLattice {
    pub fn maps(&self) -> &[JoinMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn index_of(&self, f: &JoinMap) -> Option<usize> {
        self.index.get(&f.table).copied()
    }

    pub fn top(&self) -> &JoinMap {
        &self.maps[self.lattice.top()]
    }

    pub fn bottom(&self) -> &JoinMap {
        &self.maps[self.lattice.bottom()]
    }

    /// Join in `Q(L1, L2)` taken from the lattice tables.
    pub fn join(&self, f: &JoinMap, g: &JoinMap) -> Option<&JoinMap> {
        Some(&self.maps[self.lattice.join2(self.index_of(f)?, self.index_of(g)?)])
    }

    /// Meet in `Q(L1, L2)`: the join of all common lower bounds, which in
    /// general differs from the pointwise meet.
    pub fn meet(&self, f: &JoinMap, g: &JoinMap) -> Option<&JoinMap> {
        Some(&self.maps[self.lattice.meet2(self.index_of(f)?, self.index_of(g)?)])
    }
}

/// Enumerates `Q(L1, L2)` in lexicographic order of tables.
///
/// Images are chosen for join-irreducible elements only, monotonically, and
/// extended to every element by joins; each candidate is then checked for
/// join preservation.
pub fn enumerate_q(l1: &Arc<FiniteLattice>, l2: &Arc<FiniteLattice>) -> Result<QLattice, GaloisError> {
    if l1.len() > ENUMERATION_LIMIT || l2.len() > ENUMERATION_LIMIT {
        return Err(GaloisError::TooLarge(l1.len(), l2.len()));
    }
    let mut irreducibles = l1.join_irreducibles();
    // down-set size is a linear extension of the order
    irreducibles.sort_by_key(|&j| l1.elements().filter(|&x| l1.leq(x, j)).count());

    let mut tables = Vec::new();
    let mut images = vec![0; irreducibles.len()];
    extend(l1, l2, &irreducibles, &mut images, 0, &mut tables);
    tables.sort();

    let maps: Vec<JoinMap> = tables
        .into_iter()
        .map(|table| JoinMap { source: l1.clone(), target: l2.clone(), table })
        .collect();
    let n = maps.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = maps[i].leq(&maps[j]).expect("same signature");
        }
    }
    let labels = maps.iter().map(|m| format!("{:?}", m.table)).collect();
    let lattice = FiniteLattice::from_relation(labels, leq)?;
    let index = maps.iter().enumerate().map(|(i, m)| (m.table.clone(), i)).collect();
    let q = QLattice { source: l1.clone(), target: l2.clone(), maps, lattice, index };

    for i in 0..n {
        for j in (i + 1)..n {
            let pointwise = pointwise_join(l1, l2, &[q.maps[i].clone(), q.maps[j].clone()])?;
            if q.index_of(&pointwise) != Some(q.lattice.join2(i, j)) {
                return Err(GaloisError::NotJoinPreserving(format!(
                    "Q join of {i} and {j} is not pointwise"
                )));
            }
        }
    }
    Ok(q)
}

fn extend(
    l1: &FiniteLattice,
    l2: &FiniteLattice,
    irreducibles: &[Element],
    images: &mut [Element],
    depth: usize,
    out: &mut Vec<Vec<Element>>,
) {
    if depth == irreducibles.len() {
        let table: Vec<Element> = l1
            .elements()
            .map(|x| {
                let parts = irreducibles
                    .iter()
                    .zip(images.iter())
                    .filter(|(&j, _)| l1.leq(j, x))
                    .map(|(_, &img)| img);
                l2.join(parts).expect("indices are in range")
            })
            .collect();
        if join_violation(&table, l1, l2).is_none() {
            out.push(table);
        }
        return;
    }
    let j = irreducibles[depth];
    for candidate in l2.elements() {
        let monotone = (0..depth).all(|k| !l1.leq(irreducibles[k], j) || l2.leq(images[k], candidate));
        if monotone {
            images[depth] = candidate;
            extend(l1, l2, irreducibles, images, depth + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    /// Every total table, filtered by the join-preservation validator.
    fn brute_force_q(l1: &FiniteLattice, l2: &FiniteLattice) -> Vec<Vec<Element>> {
        let n1 = l1.len();
        let total = l2.len().pow(n1 as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let table: Vec<_> = (0..n1)
                .map(|_| {
                    let d = rest % l2.len();
                    rest /= l2.len();
                    d
                })
                .collect();
            if is_join_preserving(&table, l1, l2) {
                out.push(table);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn join_preservation_examples() {
        let b2 = FiniteLattice::boolean2();
        let chain = FiniteLattice::chain(2);
        assert!(is_join_preserving(&[0, 1, 2, 3], &b2, &b2));
        let (l1, l2) = (arc(b2.clone()), arc(chain.clone()));
        assert!(is_join_preserving(separation_state(&l1, &l2).table(), &b2, &chain));
        assert!(!is_join_preserving(&[0, 1, 1, 0], &b2, &chain));
        assert!(matches!(
            JoinMap::new(l1, l2, vec![0, 1, 1, 0]),
            Err(GaloisError::NotJoinPreserving(_))
        ));
    }

    #[test]
    fn dual_examples() {
        let b2 = arc(FiniteLattice::boolean2());
        let id = JoinMap::identity(b2.clone());
        assert_eq!(id.dual().table(), &[0, 1, 2, 3]);

        let sep = separation_state(&b2, &b2);
        assert_eq!(sep.dual().table(), &[0, 0, 0, 3]);
        let absurd = absurd_state(&b2, &b2);
        assert_eq!(absurd.dual().table(), &[3, 3, 3, 3]);

        // Constant top is the dual of the absurd state.
        let top = MeetMap::new(b2.clone(), b2.clone(), vec![3; 4]).unwrap();
        assert_eq!(top.adjoint(), absurd);
        assert_eq!(sep.dual().adjoint(), sep);
        let g = MeetMap::new(b2.clone(), b2.clone(), vec![0, 1, 2, 3]).unwrap();
        assert_eq!(g.adjoint(), id);
        assert!(matches!(
            adjoint_of_table(b2.clone(), b2.clone(), vec![0, 1, 2, 2]),
            Err(GaloisError::NotMeetPreserving(_))
        ));
    }

    #[test]
    fn adjoint_by_minimum_search() {
        // min{b | a ≤ g(b)} found by scanning, independent of lattice meets.
        let b2 = arc(FiniteLattice::boolean2());
        let g = MeetMap::new(b2.clone(), b2.clone(), vec![0, 1, 2, 3]).unwrap();
        let f = g.adjoint();
        for a in b2.elements() {
            let candidates: Vec<_> = b2.elements().filter(|&b| b2.leq(a, g.apply(b))).collect();
            let min = candidates
                .iter()
                .copied()
                .find(|&m| candidates.iter().all(|&b| b2.leq(m, b)))
                .unwrap();
            assert_eq!(f.apply(a), min);
        }
    }

    #[test]
    fn enumeration_sizes_match_brute_force() {
        let chain = arc(FiniteLattice::chain(2));
        let b2 = arc(FiniteLattice::boolean2());
        let q = enumerate_q(&chain, &chain).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.bottom(), &absurd_state(&chain, &chain));
        assert_eq!(q.top(), &JoinMap::identity(chain.clone()));
        assert_eq!(enumerate_q(&b2, &chain).unwrap().len(), 4);
        assert_eq!(enumerate_q(&chain, &b2).unwrap().len(), 4);

        let catalogue = [FiniteLattice::chain(2), FiniteLattice::chain(3), FiniteLattice::boolean2(), FiniteLattice::mo2()];
        for l1 in &catalogue {
            for l2 in &catalogue {
                let q = enumerate_q(&arc(l1.clone()), &arc(l2.clone())).unwrap();
                let tables: Vec<_> = q.maps().iter().map(|m| m.table().to_vec()).collect();
                assert_eq!(tables, brute_force_q(l1, l2));
            }
        }
    }

    #[test]
    fn pointwise_join_examples() {
        let chain = arc(FiniteLattice::chain(2));
        let b2 = arc(FiniteLattice::boolean2());
        assert_eq!(pointwise_join(&b2, &chain, &[]).unwrap(), absurd_state(&b2, &chain));
        let q = enumerate_q(&b2, &chain).unwrap();
        let f = q.maps()[1].clone();
        assert_eq!(pointwise_join(&b2, &chain, &[f.clone()]).unwrap(), f);
        assert_eq!(pointwise_join(&b2, &chain, q.maps()).unwrap(), separation_state(&b2, &chain));
        assert_eq!(
            pointwise_join(&b2, &b2, &[f]).unwrap_err(),
            GaloisError::MixedSignatures
        );
    }

    #[test]
    fn separation_and_absurd() {
        let chain = arc(FiniteLattice::chain(2));
        let b2 = arc(FiniteLattice::boolean2());
        assert_eq!(separation_state(&chain, &chain), JoinMap::identity(chain.clone()));
        assert!(JoinMap::identity(b2.clone()).leq(&separation_state(&b2, &b2)).unwrap());
        assert!(absurd_state(&b2, &chain).dual().table().iter().all(|&x| x == b2.top()));
    }

    #[test]
    fn antitone_examples() {
        let b2 = arc(FiniteLattice::boolean2());
        let q = enumerate_q(&b2, &b2).unwrap();
        let (bot, top) = (q.bottom(), q.top());
        assert!(order_antitone_check(bot, top).unwrap());
        assert!(order_antitone_check(top, top).unwrap());
        for f in q.maps() {
            for g in q.maps() {
                assert!(order_antitone_check(f, g).unwrap());
            }
        }
        let chain = arc(FiniteLattice::chain(2));
        assert_eq!(
            order_antitone_check(bot, &absurd_state(&chain, &chain)),
            Err(GaloisError::MixedSignatures)
        );
    }

    #[test]
    fn classification_examples() {
        let chain = arc(FiniteLattice::chain(2));
        let b2 = arc(FiniteLattice::boolean2());
        let c = classify_map(&separation_state(&chain, &chain));
        assert!(c.atomistic && c.separation_like);
        assert_eq!(c.label(), "atomistic");
        let c = classify_map(&JoinMap::identity(b2.clone()));
        assert!(c.atomistic && !c.separation_like);
        let both_to_top = JoinMap::new(b2.clone(), b2.clone(), vec![0, 3, 3, 3]).unwrap();
        let c = classify_map(&both_to_top);
        assert!(!c.atomistic && c.separation_like);
        assert_eq!(c.label(), "separation-like");
        let f = JoinMap::new(b2.clone(), b2.clone(), vec![0, 3, 0, 3]).unwrap();
        assert_eq!(classify_map(&f).label(), "other");
    }

    #[test]
    fn q_meet_is_not_pointwise_in_general() {
        // In Q(MO2, MO2) some pair has a pointwise meet that is not a join map.
        let mo2 = arc(FiniteLattice::mo2());
        let q = enumerate_q(&mo2, &mo2).unwrap();
        let mut found = false;
        'outer: for f in q.maps() {
            for g in q.maps() {
                let pw: Vec<_> = f.table().iter().zip(g.table()).map(|(&a, &b)| mo2.meet2(a, b)).collect();
                if !is_join_preserving(&pw, &mo2, &mo2) {
                    let m = q.meet(f, g).unwrap();
                    assert!(m.leq(f).unwrap() && m.leq(g).unwrap());
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn too_large() {
        let big = arc(FiniteLattice::chain(9));
        let small = arc(FiniteLattice::chain(2));
        assert_eq!(enumerate_q(&big, &small).unwrap_err(), GaloisError::TooLarge(9, 2));
    }
}
