//! Seeded random source instances for batch verification.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gf::{FieldOrder, FiniteMatrix};
use crate::prob::Probability;
use crate::sources::{Edge, EdgeDistribution, FiniteLinearSource, HypergraphicalSource, Source};

/// Hypergraphical source with 2–4 users and 1–4 edges. Edge distributions
/// are uniform or small exact pmfs.
pub fn random_hypergraphical<R: Rng + ?Sized>(rng: &mut R) -> HypergraphicalSource {
    let users = rng.gen_range(2..=4);
    let edge_count = rng.gen_range(1..=4);
    let edges = (0..edge_count)
        .map(|i| {
            let mask = rng.gen_range(1u64..1 << users);
            let members: Vec<usize> = (0..users).filter(|u| mask >> u & 1 == 1).collect();
            let dist = if rng.gen_bool(0.7) {
                EdgeDistribution::Uniform(rng.gen_range(2..=3))
            } else {
                let k = rng.gen_range(2..=3);
                let weights: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
                let total: u64 = weights.iter().sum();
                EdgeDistribution::Pmf(weights.iter().map(|&w| Probability::ratio(w, total)).collect())
            };
            Edge::new(format!("e{}", i + 1), &members, dist)
        })
        .collect();
    HypergraphicalSource::new(users, edges).expect("generated sources are valid")
}

/// Uniform random matrix over GF(q).
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, q: FieldOrder, rows: usize, cols: usize) -> FiniteMatrix {
    let entries = (0..rows * cols).map(|_| rng.gen_range(0..q.get())).collect();
    FiniteMatrix::new(q, rows, cols, entries).expect("residues in range")
}

/// Finite linear source over GF(q) for q ∈ {2,3,5}, with `d ≤ max_dim`,
/// 2–3 users and at most 3 columns per user. Every user's view is built on
/// a shared random block, so nontrivial intersections are common.
pub fn random_finite_linear<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> FiniteLinearSource {
    let q = FieldOrder::new(*[2u64, 3, 5].choose(rng).expect("nonempty")).expect("prime");
    let dim = rng.gen_range(1..=max_dim);
    let users = rng.gen_range(2..=3);
    let shared_cols = rng.gen_range(0..=2);
    let shared = random_matrix(rng, q, dim, shared_cols);
    let matrices = (0..users)
        .map(|_| {
            let cols = rng.gen_range(0..=3);
            let own = random_matrix(rng, q, dim, cols);
            let keep = rng.gen_range(0..=shared_cols.min(3 - cols));
            let picked: Vec<usize> = (0..keep).collect();
            own.hcat(&shared.select_columns(&picked)).expect("same shape")
        })
        .collect();
    FiniteLinearSource::new(q, dim, matrices).expect("generated sources are valid")
}

/// Alternates between the two structured models.
pub fn random_source<R: Rng + ?Sized>(rng: &mut R, index: usize) -> Source {
    if index.is_multiple_of(2) {
        random_hypergraphical(rng).into()
    } else {
        random_finite_linear(rng, 4).into()
    }
}
