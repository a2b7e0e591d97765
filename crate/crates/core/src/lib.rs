//! Order-theoretic model of two-part quantum systems.
//!
//! Properties of each part form a complete lattice. A *state of
//! compoundness* is a join-preserving map between the two property lattices;
//! its Galois dual sends a property to its weakest cause. In the Hilbert
//! space case atomic states of compoundness are (anti)linear operators, and
//! the measurement cascade built from an operator reproduces the Born
//! probabilities of the corresponding tensor-product vector.
//!
//! | module | contents |
//! |---|---|
//! | [`lattice`] | finite lattices, ortholattices, Sasaki projection |
//! | [`galois`] | join maps, Galois duals, the lattice of states of compoundness |
//! | [`hilbert`] | subspaces of `C^n` with tolerant lattice operations |
//! | [`compound`] | (anti)linear operators, tensor correspondence, quadruples |
//! | [`cascade`] | density states, Lüders transitions, measurement cascades |
//! | [`quantale`] | proper state spaces and their transition quantale |
//! | [`io`] | JSON file formats |
//! | [`suite`] | seeded verification suites |
//!
//! The `book/` directory at the repository root walks through the concepts;
//! its code listings are compiled as doc-tests of this crate.

pub mod cascade;
pub mod compound;
pub mod density;
pub mod galois;
pub mod hilbert;
pub mod io;
pub mod lattice;
mod linalg;
pub mod quantale;
pub mod random;
pub mod suite;

pub use density::DensityState;
pub use galois::{JoinMap, MeetMap, QLattice};
pub use hilbert::Subspace;
pub use lattice::{FiniteLattice, OrthoLattice};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/galois.md")]
    mod galois {}
    #[doc = include_str!("../../../book/src/hilbert.md")]
    mod hilbert {}
    #[doc = include_str!("../../../book/src/compound.md")]
    mod compound {}
    #[doc = include_str!("../../../book/src/cascade.md")]
    mod cascade {}
    #[doc = include_str!("../../../book/src/quantale.md")]
    mod quantale {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
