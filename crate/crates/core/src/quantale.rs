//! Finite proper-state spaces and the quantale of their transitions.
//!
//! A [`ProperStateSpace`] assigns to each proper state its strongest actual
//! property. Transitions act on sets of states and preserve unions, so they
//! are determined by the image of each single state. Membership in the
//! quantale additionally requires compatibility with the closure
//! `C̄(T) = {p | c(p) ≤ C(T)}`: `f(C̄(T)) ⊆ C̄(f(T))`.
//!
//! Each member induces a join-preserving propagation of properties
//! `C(T) ↦ C(f(T))` on the sublattice of properties that are joins of state
//! properties; [`property_propagation`] computes it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::galois::{pointwise_join, GaloisError, JoinMap};
use crate::lattice::{Element, FiniteLattice};

/// Set of states as a bit mask.
pub type StateSet = u32;

/// Largest state space accepted.
pub const MAX_STATES: usize = 8;
/// Largest state space for which all transitions are enumerated.
pub const MAX_ENUMERATED_STATES: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantaleError {
    #[error("{0} states exceed the limit of {1}")]
    TooLarge(usize, usize),
    #[error("property map has length {got}, expected {expected}")]
    CMapLength { expected: usize, got: usize },
    #[error("property {0} is not an element of the lattice")]
    UnknownProperty(Element),
    #[error("image table has length {got}, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("image {0:#b} mentions states outside the space")]
    UnknownState(StateSet),
    #[error("transition is not a member of the quantale (witness set {0:#b})")]
    NotMember(StateSet),
    #[error("transitions live on different state spaces")]
    MixedSpaces,
    #[error("property propagation is ill-defined: C({0:#b}) = C({1:#b}) but their images differ")]
    IllDefined(StateSet, StateSet),
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProperStateSpace {
    states: Vec<String>,
    lattice: Arc<FiniteLattice>,
    c_map: Vec<Element>,
    /// Elements of the lattice of the form `C(T)`, ascending by index.
    image: Vec<Element>,
    sublattice: Arc<FiniteLattice>,
}

impl ProperStateSpace {
    pub fn new(states: Vec<String>, lattice: Arc<FiniteLattice>, c_map: Vec<Element>) -> Result<Self, QuantaleError> {
        if states.len() > MAX_STATES {
            return Err(QuantaleError::TooLarge(states.len(), MAX_STATES));
        }
        if c_map.len() != states.len() {
            return Err(QuantaleError::CMapLength { expected: states.len(), got: c_map.len() });
        }
        if let Some(&bad) = c_map.iter().find(|&&x| x >= lattice.len()) {
            return Err(QuantaleError::UnknownProperty(bad));
        }
        let mut space = Self {
            states,
            lattice: lattice.clone(),
            c_map,
            image: Vec::new(),
            sublattice: lattice,
        };
        let mut image: Vec<Element> = space.subsets().map(|t| space.property(t)).collect();
        image.sort_unstable();
        image.dedup();
        let n = image.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = space.lattice.leq(image[i], image[j]);
            }
        }
        let labels = image.iter().map(|&x| space.lattice.label(x).to_owned()).collect();
        // A join-closed subset containing bottom is a complete lattice.
        space.sublattice = Arc::new(FiniteLattice::from_relation(labels, leq).map_err(GaloisError::from)?);
        space.image = image;
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn c_map(&self) -> &[Element] {
        &self.c_map
    }

    /// The set of all states.
    pub fn everything(&self) -> StateSet {
        ((1u64 << self.len()) - 1) as StateSet
    }

    pub fn subsets(&self) -> impl Iterator<Item = StateSet> {
        0..=self.everything()
    }

    fn members_of(&self, t: StateSet) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&p| t & (1 << p) != 0)
    }

    /// `C(T) = ∨{c(p) | p ∈ T}`.
    pub fn property(&self, t: StateSet) -> Element {
        self.lattice
            .join(self.members_of(t).map(|p| self.c_map[p]))
            .expect("c_map is validated")
    }

    /// `C̄(T) = {p | c(p) ≤ C(T)}`.
    pub fn closure(&self, t: StateSet) -> StateSet {
        let bound = self.property(t);
        (0..self.len())
            .filter(|&p| self.lattice.leq(self.c_map[p], bound))
            .fold(0, |acc, p| acc | (1 << p))
    }

    /// The pre-order `p ≤_C q`.
    pub fn preorder_leq(&self, p: usize, q: usize) -> bool {
        self.lattice.leq(self.c_map[p], self.c_map[q])
    }

    /// Properties of the form `C(T)`.
    pub fn property_image(&self) -> &[Element] {
        &self.image
    }

    /// The property image as a lattice in its own right.
    pub fn property_sublattice(&self) -> &Arc<FiniteLattice> {
        &self.sublattice
    }

    fn sub_index(&self, x: Element) -> usize {
        self.image.binary_search(&x).expect("element of the property image")
    }
}

/// A union-preserving map on sets of states, given by the image of each state.
#[derive(Clone, PartialEq)]
pub struct TransitionMap {
    space: Arc<ProperStateSpace>,
    images: Vec<StateSet>,
}

impl fmt::Debug for TransitionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.images.iter().map(|s| format!("{s:0w$b}", w = self.space.len())).collect();
        write!(f, "Transition[{}]", sets.join(", "))
    }
}

impl TransitionMap {
    pub fn new(space: Arc<ProperStateSpace>, images: Vec<StateSet>) -> Result<Self, QuantaleError> {
        if images.len() != space.len() {
            return Err(QuantaleError::TableLength { expected: space.len(), got: images.len() });
        }
        if let Some(&bad) = images.iter().find(|&&s| s & !space.everything() != 0) {
            return Err(QuantaleError::UnknownState(bad));
        }
        Ok(Self { space, images })
    }

    pub fn identity(space: &Arc<ProperStateSpace>) -> Self {
        Self { space: space.clone(), images: (0..space.len()).map(|p| 1 << p).collect() }
    }

    /// Constant `∅`, the bottom of the quantale.
    pub fn empty(space: &Arc<ProperStateSpace>) -> Self {
        Self { space: space.clone(), images: vec![0; space.len()] }
    }

    pub fn space(&self) -> &Arc<ProperStateSpace> {
        &self.space
    }

    pub fn images(&self) -> &[StateSet] {
        &self.images
    }

    /// `f(T) = ∪{f({p}) | p ∈ T}`.
    pub fn apply(&self, t: StateSet) -> StateSet {
        self.space.members_of(t).fold(0, |acc, p| acc | self.images[p])
    }

    fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }
}

/// A subset `T` with `f(C̄(T)) ⊄ C̄(f(T))`, if any.
pub fn membership_witness(f: &TransitionMap) -> Option<StateSet> {
    let s = &f.space;
    s.subsets().find(|&t| {
        let lhs = f.apply(s.closure(t));
        let rhs = s.closure(f.apply(t));
        lhs & !rhs != 0
    })
}

/// Closure compatibility on every subset.
pub fn is_member(f: &TransitionMap) -> bool {
    membership_witness(f).is_none()
}

fn require_member(f: &TransitionMap) -> Result<(), QuantaleError> {
    match membership_witness(f) {
        Some(t) => Err(QuantaleError::NotMember(t)),
        None => Ok(()),
    }
}

/// `f ∘ g`.
pub fn compose(f: &TransitionMap, g: &TransitionMap) -> Result<TransitionMap, QuantaleError> {
    if !f.same_space(g) {
        return Err(QuantaleError::MixedSpaces);
    }
    require_member(f)?;
    require_member(g)?;
    let out = compose_unchecked(f, g);
    debug_assert!(is_member(&out));
    Ok(out)
}

fn compose_unchecked(f: &TransitionMap, g: &TransitionMap) -> TransitionMap {
    TransitionMap { space: f.space.clone(), images: g.images.iter().map(|&s| f.apply(s)).collect() }
}

/// Pointwise union; the empty union is [`TransitionMap::empty`].
pub fn union_join(space: &Arc<ProperStateSpace>, fs: &[TransitionMap]) -> Result<TransitionMap, QuantaleError> {
    let mut images = vec![0; space.len()];
    for f in fs {
        if !(Arc::ptr_eq(&f.space, space) || *f.space == **space) {
            return Err(QuantaleError::MixedSpaces);
        }
        require_member(f)?;
        for (acc, &s) in images.iter_mut().zip(&f.images) {
            *acc |= s;
        }
    }
    Ok(TransitionMap { space: space.clone(), images })
}

/// Every member of the quantale, in lexicographic order of image tables.
pub fn enumerate_members(space: &Arc<ProperStateSpace>) -> Result<Vec<TransitionMap>, QuantaleError> {
    let n = space.len();
    if n > MAX_ENUMERATED_STATES {
        return Err(QuantaleError::TooLarge(n, MAX_ENUMERATED_STATES));
    }
    let choices = 1usize << n;
    let total = choices.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let mut images = vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = (rest % choices) as StateSet;
            rest /= choices;
        }
        let f = TransitionMap { space: space.clone(), images };
        if is_member(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// The propagation `C(T) ↦ C(f(T))` of a member transition.
#[derive(Debug, Clone)]
pub struct Propagation {
    /// Join map on [`ProperStateSpace::property_sublattice`].
    pub map: JoinMap,
    space: Arc<ProperStateSpace>,
}

impl Propagation {
    /// Property of the full lattice reached from `x` in the property image.
    pub fn apply_property(&self, x: Element) -> Option<Element> {
        let i = self.space.image.binary_search(&x).ok()?;
        Some(self.space.image[self.map.apply(i)])
    }

    /// Extension to the whole lattice by `x ↦ ∨{f_L(y) | y ≤ x, y in the
    /// property image}`. Fails when this is not join preserving, which can
    /// only happen if the property image is a proper subset of the lattice.
    pub fn extend_to_lattice(&self) -> Result<JoinMap, GaloisError> {
        let l = &self.space.lattice;
        let table = l
            .elements()
            .map(|x| {
                let below = self
                    .space
                    .image
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| l.leq(y, x))
                    .map(|(i, _)| self.space.image[self.map.apply(i)]);
                l.join(below).expect("indices are in range")
            })
            .collect();
        JoinMap::new(l.clone(), l.clone(), table)
    }
}

pub fn property_propagation(f: &TransitionMap) -> Result<Propagation, QuantaleError> {
    let s = &f.space;
    let sub = s.property_sublattice();
    let mut table: Vec<Option<(Element, StateSet)>> = vec![None; sub.len()];
    for t in s.subsets() {
        let from = s.sub_index(s.property(t));
        let to = s.sub_index(s.property(f.apply(t)));
        match table[from] {
            None => table[from] = Some((to, t)),
            Some((seen, witness)) if seen != to => return Err(QuantaleError::IllDefined(witness, t)),
            Some(_) => {}
        }
    }
    let table = table.into_iter().map(|e| e.expect("every image element is hit").0).collect();
    let map = JoinMap::new(sub.clone(), sub.clone(), table)?;
    Ok(Propagation { map, space: s.clone() })
}

/// Outcome of [`epimorphism_check`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct EpiReport {
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl EpiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For all pairs in `sample`: propagation turns `∘` into composition and `∪`
/// into the pointwise join.
pub fn epimorphism_check(space: &Arc<ProperStateSpace>, sample: &[TransitionMap]) -> Result<EpiReport, QuantaleError> {
    let props = sample
        .iter()
        .map(property_propagation)
        .collect::<Result<Vec<_>, _>>()?;
    let sub = space.property_sublattice();
    let mut report = EpiReport::default();
    for (i, f) in sample.iter().enumerate() {
        for (j, g) in sample.iter().enumerate() {
            report.pairs_checked += 1;
            let composed = property_propagation(&compose(f, g)?)?;
            let expected = props[i].map.compose(&props[j].map)?;
            if composed.map != expected {
                report.failures.push(format!("composition of {f:?} and {g:?}"));
            }
            let joined = property_propagation(&union_join(space, &[f.clone(), g.clone()])?)?;
            let expected = pointwise_join(sub, sub, &[props[i].map.clone(), props[j].map.clone()])?;
            if joined.map != expected {
                report.failures.push(format!("union of {f:?} and {g:?}"));
            }
        }
    }
    Ok(report)
}

/// Exhaustive quantale law check over a set of members closed under `∘` and
/// binary `∪`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct QuantaleLawReport {
    pub members: usize,
    pub closed: bool,
    pub associative: bool,
    pub left_distributive: bool,
    pub right_distributive: bool,
    pub bottom_is_unit_of_union: bool,
}

impl QuantaleLawReport {
    /// Laws asserted for the quantale; right distributivity is reported
    /// separately.
    pub fn passed(&self) -> bool {
        self.closed && self.associative && self.left_distributive && self.bottom_is_unit_of_union
    }
}

/// Checks associativity of `∘` and distributivity over binary and empty
/// unions for every triple of `members`. Binary and empty unions generate all
/// finite unions, and the member set is finite.
pub fn quantale_laws(space: &Arc<ProperStateSpace>, members: &[TransitionMap]) -> Result<QuantaleLawReport, QuantaleError> {
    let n = members.len();
    let index: std::collections::HashMap<&[StateSet], usize> =
        members.iter().enumerate().map(|(i, m)| (m.images.as_slice(), i)).collect();
    let mut closed = true;
    let mut lookup = |m: &TransitionMap| -> usize {
        match index.get(m.images.as_slice()) {
            Some(&i) => i,
            None => {
                closed = false;
                usize::MAX
            }
        }
    };
    let mut comp = vec![0usize; n * n];
    let mut join = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            comp[i * n + j] = lookup(&compose_unchecked(&members[i], &members[j]));
            let u = union_join(space, &[members[i].clone(), members[j].clone()])?;
            join[i * n + j] = lookup(&u);
        }
    }
    let empty = lookup(&TransitionMap::empty(space));
    let mut report = QuantaleLawReport { members: n, closed, ..Default::default() };
    if !report.closed {
        return Ok(report);
    }
    report.associative = true;
    report.left_distributive = true;
    report.right_distributive = true;
    for f in 0..n {
        for g in 0..n {
            let fg = comp[f * n + g];
            for h in 0..n {
                if comp[fg * n + h] != comp[f * n + comp[g * n + h]] {
                    report.associative = false;
                }
                // f ∘ (g ∪ h) = (f ∘ g) ∪ (f ∘ h)
                if comp[f * n + join[g * n + h]] != join[fg * n + comp[f * n + h]] {
                    report.left_distributive = false;
                }
                // (g ∪ h) ∘ f = (g ∘ f) ∪ (h ∘ f)
                if comp[join[g * n + h] * n + f] != join[comp[g * n + f] * n + comp[h * n + f]] {
                    report.right_distributive = false;
                }
            }
        }
        if comp[f * n + empty] != empty {
            report.left_distributive = false;
        }
        if comp[empty * n + f] != empty {
            report.right_distributive = false;
        }
    }
    report.bottom_is_unit_of_union = (0..n).all(|f| join[f * n + empty] == f && join[empty * n + f] == f);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(c_map: Vec<Element>, lattice: FiniteLattice) -> Arc<ProperStateSpace> {
        let states = (0..c_map.len()).map(|i| format!("p{i}")).collect();
        Arc::new(ProperStateSpace::new(states, Arc::new(lattice), c_map).unwrap())
    }

    #[test]
    fn closure_and_preorder() {
        let s = space(vec![1, 1, 2], FiniteLattice::chain(3));
        assert_eq!(s.property(0), 0);
        assert_eq!(s.property(0b011), 1);
        assert_eq!(s.closure(0b001), 0b011);
        assert!(s.preorder_leq(0, 1) && s.preorder_leq(1, 0));
        assert!(s.preorder_leq(0, 2) && !s.preorder_leq(2, 0));
        assert_eq!(s.property_image(), &[0, 1, 2]);
    }

    #[test]
    fn membership_examples() {
        let s = space(vec![1, 2, 2], FiniteLattice::chain(3));
        assert!(is_member(&TransitionMap::identity(&s)));
        assert!(is_member(&TransitionMap::empty(&s)));
    }

    #[test]
    fn non_member_found_by_search() {
        // First map in lexicographic order that fails closure compatibility.
        let s = space(vec![1, 2, 2], FiniteLattice::chain(3));
        let mut found = None;
        'search: for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let f = TransitionMap::new(s.clone(), vec![a, b, c]).unwrap();
                    if !is_member(&f) {
                        found = Some(f);
                        break 'search;
                    }
                }
            }
        }
        let f = found.unwrap();
        assert_eq!(f.images(), &[0, 0, 1]);
        // p2 sits in the top class; sending it to the bottom class p0 while
        // p1 (same class) goes to ∅ breaks f(C̄{p2}) ⊆ C̄(f{p2}).
        assert_eq!(membership_witness(&f), Some(0b010));
        assert!(matches!(compose(&f, &f), Err(QuantaleError::NotMember(_))));
    }

    #[test]
    fn compose_and_union_examples() {
        let s = space(vec![1, 2, 2], FiniteLattice::chain(3));
        let members = enumerate_members(&s).unwrap();
        let id = TransitionMap::identity(&s);
        for f in &members {
            assert_eq!(&compose(f, &id).unwrap(), f);
            assert_eq!(&compose(&id, f).unwrap(), f);
        }
        assert_eq!(union_join(&s, &[]).unwrap(), TransitionMap::empty(&s));
        // A spread of triples; the exhaustive check is `quantale_laws`.
        for f in members.iter().step_by(17) {
            for g in members.iter().step_by(7) {
                for h in members.iter().step_by(5) {
                    let gh = union_join(&s, &[g.clone(), h.clone()]).unwrap();
                    let lhs = compose(f, &gh).unwrap();
                    let rhs = union_join(&s, &[compose(f, g).unwrap(), compose(f, h).unwrap()]).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn propagation_examples() {
        let s = space(vec![1, 2, 2], FiniteLattice::chain(3));
        let id = property_propagation(&TransitionMap::identity(&s)).unwrap();
        assert_eq!(id.map, JoinMap::identity(s.property_sublattice().clone()));
        let empty = property_propagation(&TransitionMap::empty(&s)).unwrap();
        assert!(empty.map.table().iter().all(|&x| x == s.property_sublattice().bottom()));
        assert_eq!(empty.apply_property(2), Some(0));

        // Two states share the top property; collapse both onto p1.
        let collapse = TransitionMap::new(s.clone(), vec![0b001, 0b010, 0b010]).unwrap();
        assert!(is_member(&collapse));
        let prop = property_propagation(&collapse).unwrap();
        assert!(crate::galois::is_join_preserving(prop.map.table(), &prop.map.source(), &prop.map.target()));
        assert_eq!(prop.extend_to_lattice().unwrap().table(), &[0, 1, 2]);
    }

    #[test]
    fn ill_defined_propagation() {
        // Non-member: p1 and p2 have the same property but different images.
        let s = space(vec![1, 2, 2], FiniteLattice::chain(3));
        let f = TransitionMap::new(s.clone(), vec![0b001, 0b001, 0b100]).unwrap();
        assert!(!is_member(&f));
        assert!(matches!(property_propagation(&f), Err(QuantaleError::IllDefined(..))));
    }

    #[test]
    fn partial_image_extension() {
        // Only the top of B2 is a state property; a and b are not in the image.
        let s = space(vec![3], FiniteLattice::boolean2());
        assert_eq!(s.property_image(), &[0, 3]);
        let prop = property_propagation(&TransitionMap::identity(&s)).unwrap();
        assert_eq!(prop.apply_property(3), Some(3));
        assert!(prop.extend_to_lattice().is_err());
    }

    #[test]
    fn top_member_propagates_to_top() {
        let s = space(vec![1, 2, 2], FiniteLattice::chain(3));
        let members = enumerate_members(&s).unwrap();
        let top = union_join(&s, &members).unwrap();
        assert!(is_member(&top));
        let top_prop = property_propagation(&top).unwrap();
        for f in &members {
            assert!(property_propagation(f).unwrap().map.leq(&top_prop.map).unwrap());
        }
    }

    #[test]
    fn epimorphism_small() {
        let s = space(vec![1, 1], FiniteLattice::chain(2));
        let members = enumerate_members(&s).unwrap();
        let report = epimorphism_check(&s, &members).unwrap();
        assert!(report.passed() && report.pairs_checked == members.len().pow(2));
        let laws = quantale_laws(&s, &members).unwrap();
        assert!(laws.passed() && laws.right_distributive, "{laws:?}");
        let one = epimorphism_check(&s, &[TransitionMap::identity(&s)]).unwrap();
        assert!(one.passed());
    }

    #[test]
    fn limits() {
        let lattice = Arc::new(FiniteLattice::chain(2));
        let big = ProperStateSpace::new((0..9).map(|i| i.to_string()).collect(), lattice.clone(), vec![1; 9]);
        assert_eq!(big.unwrap_err(), QuantaleError::TooLarge(9, MAX_STATES));
        let five = Arc::new(ProperStateSpace::new((0..5).map(|i| i.to_string()).collect(), lattice, vec![1; 5]).unwrap());
        assert!(matches!(enumerate_members(&five), Err(QuantaleError::TooLarge(5, _))));
    }
}
