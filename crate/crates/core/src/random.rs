//! Seeded random generators for vectors, subspaces, operators and states.
//!
//! Every randomised check in the crate takes an explicit [`Rng`] so that
//! runs are reproducible from a seed.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{c, CMatrix, CVector, Subspace, DEFAULT_TOL};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Vector with i.i.d. standard complex Gaussian entries.
pub fn vector(rng: &mut Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)))
}

pub fn matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Haar-ish unitary from the QR decomposition of a Gaussian matrix.
pub fn unitary(rng: &mut Rng, n: usize) -> CMatrix {
    matrix(rng, n, n).qr().q()
}

/// `k` orthonormal columns in `C^n`.
pub fn frame(rng: &mut Rng, n: usize, k: usize) -> CMatrix {
    assert!(k <= n);
    unitary(rng, n).columns(0, k).into_owned()
}

pub fn subspace(rng: &mut Rng, n: usize, k: usize) -> Subspace {
    Subspace::span(&frame(rng, n, k), DEFAULT_TOL).expect("finite frame")
}

/// Subspace of uniformly random rank in `0..=n`.
pub fn any_subspace(rng: &mut Rng, n: usize) -> Subspace {
    let k = rng.random_range(0..=n);
    subspace(rng, n, k)
}

pub fn ray(rng: &mut Rng, n: usize) -> Subspace {
    Subspace::ray(&vector(rng, n))
}

/// Random density matrix of rank `rank` supported inside `support`.
pub fn density_in(rng: &mut Rng, support: &Subspace, rank: usize) -> CMatrix {
    let n = support.ambient_dim();
    let k = support.rank();
    assert!(rank >= 1 && rank <= k);
    let inner = frame(rng, k, rank);
    let vecs = support.frame() * inner;
    let mut rho = CMatrix::zeros(n, n);
    let mut total = 0.0;
    for col in vecs.column_iter() {
        let w: f64 = rng.random_range(0.05..1.0);
        total += w;
        rho += (&col * col.adjoint()).scale(w);
    }
    rho.unscale(total)
}

/// Random density matrix of random rank on `C^n`.
pub fn density(rng: &mut Rng, n: usize) -> CMatrix {
    let rank = rng.random_range(1..=n);
    density_in(rng, &Subspace::full(n), rank)
}

pub fn usize_in(rng: &mut Rng, lo: usize, hi_inclusive: usize) -> usize {
    rng.random_range(lo..=hi_inclusive)
}

pub fn coin(rng: &mut Rng) -> bool {
    rng.random_bool(0.5)
}
