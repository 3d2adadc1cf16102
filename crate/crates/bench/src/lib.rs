//! Instance builders shared by the solver benchmarks.

use campopt_core::{generated_network, Graph, Network};

/// Seeded random graph with generated weights (s = 0.5).
pub fn synthetic(n: usize, m: usize, seed: u64) -> Network {
    generated_network(&Graph::random(n, m, seed), 0.5, seed, None)
        .expect("generated weights are valid")
}
