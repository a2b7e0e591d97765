//! Finite lattices with dense order and operation tables, ortholattices and
//! the Sasaki projection.
//!
//! Elements are identified by index; labels are carried for display only.
//! Every constructor validates its input exhaustively, so a value of type
//! [`FiniteLattice`] or [`OrthoLattice`] always satisfies the lattice (and
//! orthomodular) laws.

use std::fmt;

use thiserror::Error;

/// Index of an element inside a [`FiniteLattice`].
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("element index {0} is out of range")]
    UnknownElement(Element),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("not a poset: {0}")]
    NotAPoset(PosetViolation),
    #[error("not a lattice: elements {0} and {1} have no {2}")]
    NotALattice(Element, Element, BoundKind),
    #[error("lattice has no bottom or no top element")]
    NoBounds,
    #[error("orthocomplement table has length {got}, expected {expected}")]
    OrthoLength { expected: usize, got: usize },
    #[error("orthocomplement is not an involution at element {0}")]
    NotInvolutive(Element),
    #[error("orthocomplement is not order reversing on {0} <= {1}")]
    NotOrderReversing(Element, Element),
    #[error("orthocomplement of {0} is not a lattice complement")]
    NotComplement(Element),
    #[error("orthomodular law fails for {0} <= {1}")]
    NotOrthomodular(Element, Element),
    #[error("precondition violated: {0} is not below {1}")]
    PreconditionViolated(Element, Element),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosetViolation {
    Reflexivity(Element),
    Antisymmetry(Element, Element),
    Transitivity(Element, Element, Element),
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Reflexivity(a) => write!(f, "{a} <= {a} is missing"),
            Self::Antisymmetry(a, b) => write!(f, "{a} <= {b} and {b} <= {a} with {a} != {b}"),
            Self::Transitivity(a, b, c) => {
                write!(f, "{a} <= {b} and {b} <= {c} but not {a} <= {c}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Meet => "meet",
            Self::Join => "join",
        })
    }
}

/// A finite complete lattice stored as a dense order relation together with
/// precomputed binary meet and join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<Element>,
    join: Vec<Element>,
    bottom: Element,
    top: Element,
}

impl FiniteLattice {
    /// Builds a lattice from labels and `(i, j)` pairs meaning `i <= j`.
    ///
    /// Reflexive pairs are implied. The relation is otherwise taken as
    /// given: it must already be transitive.
    pub fn build<S: AsRef<str>>(
        labels: &[S],
        leq_pairs: &[(Element, Element)],
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for &(i, j) in leq_pairs {
            if i >= n {
                return Err(LatticeError::UnknownElement(i));
            }
            if j >= n {
                return Err(LatticeError::UnknownElement(j));
            }
            rel[i * n + j] = true;
        }
        let labels = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        Self::from_relation(labels, rel)
    }

    /// Like [`FiniteLattice::build`] but with the order given by labels.
    pub fn from_labeled_pairs(labels: &[&str], leq_pairs: &[(&str, &str)]) -> Result<Self, LatticeError> {
        let find = |l: &str| {
            labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| LatticeError::UnknownLabel(l.to_owned()))
        };
        let pairs = leq_pairs
            .iter()
            .map(|(a, b)| Ok((find(a)?, find(b)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        Self::build(labels, &pairs)
    }

    /// Validates a full `n * n` row-major order relation. Unlike
    /// [`FiniteLattice::build`], reflexivity is checked rather than implied.
    pub fn from_relation(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, LatticeError> {
        let n = labels.len();
        assert_eq!(leq.len(), n * n, "relation table must be n * n");
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(LatticeError::NotAPoset(PosetViolation::Reflexivity(a)));
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if le(a, b) && le(b, a) {
                    return Err(LatticeError::NotAPoset(PosetViolation::Antisymmetry(a, b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !le(a, b) {
                    continue;
                }
                for c in 0..n {
                    if le(b, c) && !le(a, c) {
                        return Err(LatticeError::NotAPoset(PosetViolation::Transitivity(a, b, c)));
                    }
                }
            }
        }

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let glb = extremum(n, |x| le(x, a) && le(x, b), |x, y| le(x, y))
                    .ok_or(LatticeError::NotALattice(a, b, BoundKind::Meet))?;
                let lub = extremum(n, |x| le(a, x) && le(b, x), |x, y| le(y, x))
                    .ok_or(LatticeError::NotALattice(a, b, BoundKind::Join))?;
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }

        let bottom = (0..n).find(|&x| (0..n).all(|y| le(x, y))).ok_or(LatticeError::NoBounds)?;
        let top = (0..n).find(|&x| (0..n).all(|y| le(y, x))).ok_or(LatticeError::NoBounds)?;

        Ok(Self { labels, leq, meet, join, bottom, top })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<_> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        Self::build(&labels, &pairs).expect("chains are lattices")
    }

    /// The four element Boolean lattice `{0, a, b, 1}`.
    pub fn boolean2() -> Self {
        Self::from_labeled_pairs(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("0", "1"), ("a", "1"), ("b", "1")],
        )
        .expect("B2 is a lattice")
    }

    /// The six element lantern `MO2 = {0, a, a', b, b', 1}`.
    pub fn mo2() -> Self {
        let labels = ["0", "a", "a'", "b", "b'", "1"];
        let mut pairs = Vec::new();
        for x in &labels[1..5] {
            pairs.push(("0", *x));
            pairs.push((*x, "1"));
        }
        pairs.push(("0", "1"));
        Self::from_labeled_pairs(&labels, &pairs).expect("MO2 is a lattice")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Element) -> &str {
        &self.labels[x]
    }

    /// Looks an element up by label, falling back to a numeric index.
    pub fn resolve(&self, name: &str) -> Result<Element, LatticeError> {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            return Ok(i);
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.len() => Ok(i),
            _ => Err(LatticeError::UnknownLabel(name.to_owned())),
        }
    }

    pub fn bottom(&self) -> Element {
        self.bottom
    }

    pub fn top(&self) -> Element {
        self.top
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet2(&self, a: Element, b: Element) -> Element {
        self.meet[a * self.len() + b]
    }

    pub fn join2(&self, a: Element, b: Element) -> Element {
        self.join[a * self.len() + b]
    }

    fn check(&self, x: Element) -> Result<Element, LatticeError> {
        if x < self.len() {
            Ok(x)
        } else {
            Err(LatticeError::UnknownElement(x))
        }
    }

    /// Greatest lower bound of a set; the empty meet is the top.
    pub fn meet<I: IntoIterator<Item = Element>>(&self, xs: I) -> Result<Element, LatticeError> {
        xs.into_iter()
            .try_fold(self.top, |acc, x| Ok(self.meet2(acc, self.check(x)?)))
    }

    /// Least upper bound of a set; the empty join is the bottom.
    pub fn join<I: IntoIterator<Item = Element>>(&self, xs: I) -> Result<Element, LatticeError> {
        xs.into_iter()
            .try_fold(self.bottom, |acc, x| Ok(self.join2(acc, self.check(x)?)))
    }

    /// Whether `b` covers `a`: `a < b` with nothing strictly in between.
    pub fn covers(&self, a: Element, b: Element) -> bool {
        a != b
            && self.leq(a, b)
            && self.elements().all(|x| x == a || x == b || !(self.leq(a, x) && self.leq(x, b)))
    }

    /// Elements covering the bottom.
    pub fn atoms(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.covers(self.bottom, x)).collect()
    }

    /// Non-bottom elements that are not the join of the elements strictly
    /// below them. Every element is the join of the join-irreducibles below it.
    pub fn join_irreducibles(&self) -> Vec<Element> {
        self.elements()
            .filter(|&x| {
                x != self.bottom && {
                    let below = self.elements().filter(|&y| y != x && self.leq(y, x));
                    self.join(below).expect("indices are in range") != x
                }
            })
            .collect()
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                self.elements().all(|c| {
                    self.meet2(a, self.join2(b, c)) == self.join2(self.meet2(a, b), self.meet2(a, c))
                })
            })
        })
    }
}

/// The unique `x` satisfying `pred` that dominates every other candidate
/// under `below(y, x)`, if it exists.
fn extremum(
    n: usize,
    pred: impl Fn(usize) -> bool,
    below: impl Fn(usize, usize) -> bool,
) -> Option<usize> {
    let candidates: Vec<usize> = (0..n).filter(|&x| pred(x)).collect();
    candidates
        .iter()
        .copied()
        .find(|&x| candidates.iter().all(|&y| below(y, x)))
}

/// A finite lattice with a validated orthocomplementation satisfying the
/// orthomodular law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoLattice {
    base: FiniteLattice,
    ortho: Vec<Element>,
}

impl OrthoLattice {
    /// Attaches an orthocomplement and checks every ortholattice law and the
    /// orthomodular law exhaustively.
    pub fn new(base: FiniteLattice, ortho: Vec<Element>) -> Result<Self, LatticeError> {
        let n = base.len();
        if ortho.len() != n {
            return Err(LatticeError::OrthoLength { expected: n, got: ortho.len() });
        }
        for &o in &ortho {
            base.check(o)?;
        }
        for a in 0..n {
            if ortho[ortho[a]] != a {
                return Err(LatticeError::NotInvolutive(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if base.leq(a, b) && !base.leq(ortho[b], ortho[a]) {
                    return Err(LatticeError::NotOrderReversing(a, b));
                }
            }
        }
        for a in 0..n {
            if base.meet2(a, ortho[a]) != base.bottom || base.join2(a, ortho[a]) != base.top {
                return Err(LatticeError::NotComplement(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if base.leq(a, b) && base.join2(a, base.meet2(b, ortho[a])) != b {
                    return Err(LatticeError::NotOrthomodular(a, b));
                }
            }
        }
        Ok(Self { base, ortho })
    }

    /// Boolean `B2` with `a' = b`.
    pub fn boolean2() -> Self {
        Self::new(FiniteLattice::boolean2(), vec![3, 2, 1, 0]).expect("B2 is orthomodular")
    }

    /// `MO2` with `a ↔ a'` and `b ↔ b'`.
    pub fn mo2() -> Self {
        Self::new(FiniteLattice::mo2(), vec![5, 2, 1, 4, 3, 0]).expect("MO2 is orthomodular")
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.base
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.base
    }

    pub fn ortho_table(&self) -> &[Element] {
        &self.ortho
    }

    pub fn ortho(&self, a: Element) -> Element {
        self.ortho[a]
    }

    /// `a ∧ (b ∨ a⊥)`.
    pub fn sasaki(&self, a: Element, b: Element) -> Element {
        let l = &self.base;
        l.meet2(a, l.join2(b, self.ortho[a]))
    }

    /// Orthomodular compatibility: `a = (a ∧ b) ∨ (a ∧ b⊥)` and the same with
    /// the roles of `a` and `b` swapped.
    pub fn compatible(&self, a: Element, b: Element) -> bool {
        let l = &self.base;
        let one_way = |x: Element, y: Element| {
            l.join2(l.meet2(x, y), l.meet2(x, self.ortho[y])) == x
        };
        one_way(a, b) && one_way(b, a)
    }

    /// Checks `φ_{a'} ∘ φ_a = φ_{a'}` on every element, for `a' <= a`.
    pub fn foulis_order_check(&self, a: Element, a_prime: Element) -> Result<bool, LatticeError> {
        self.base.check(a)?;
        self.base.check(a_prime)?;
        if !self.base.leq(a_prime, a) {
            return Err(LatticeError::PreconditionViolated(a_prime, a));
        }
        Ok(self
            .base
            .elements()
            .all(|b| self.sasaki(a_prime, self.sasaki(a, b)) == self.sasaki(a_prime, b)))
    }
}
