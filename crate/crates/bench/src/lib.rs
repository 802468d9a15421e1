//! Shared inputs for the benchmarks.

use l6n1_core::{random_projection, Projection};

/// Seeded random projections with `n` vertices.
pub fn sample(n: usize, count: u64) -> Vec<Projection> {
    (0..count)
        .map(|seed| random_projection(n, seed).expect("random projection"))
        .collect()
}
