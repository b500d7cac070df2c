//! Benchmark fixtures shared by the criterion targets in `benches/`.

use juniper_core::Graph;

/// Sizes of `G_n` used for the matching and decomposition benches.
pub const GRAPH_SIZES: [u32; 4] = [100, 300, 1000, 3000];

/// Sizes small enough for the exhaustive solver.
pub const SOLVER_SIZES: [u32; 3] = [12, 16, 20];

pub fn divisibility(n: u32) -> Graph {
    Graph::divisibility(n).expect("n >= 1")
}
