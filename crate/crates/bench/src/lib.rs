//! Deterministic benchmark workloads for `gck-core`.
//!
//! The benchmarks live in `benches/`; this library re-exports the core types
//! they use and builds reproducible input families of adjustable size.

pub use gck_core::decomp::{search_width, DecompMode, Engine, TreeDecomp};
pub use gck_core::homcount::{count_homs, HomCount};
pub use gck_core::model::{Hypergraph, IncidenceGraph};
pub use gck_core::{Caps, Color, Error, GuardFunction, Result};

/// The incidence graph of the cycle with `n ≥ 2` vertices and `n` binary edges.
pub fn cycle(n: usize) -> IncidenceGraph {
    let edges = (0..n).flat_map(|e| [(e, e), (e, (e + 1) % n)]);
    IncidenceGraph::new(n, n, edges).expect("every vertex lies on an edge")
}

/// The incidence graph of the path with `n ≥ 2` vertices and `n - 1` edges.
pub fn path(n: usize) -> IncidenceGraph {
    let edges = (0..n - 1).flat_map(|e| [(e, e), (e, e + 1)]);
    IncidenceGraph::new(n, n - 1, edges).expect("every vertex lies on an edge")
}

/// The `rows × cols` grid with one binary edge per horizontal or vertical
/// neighbour pair.
pub fn grid(rows: usize, cols: usize) -> IncidenceGraph {
    let at = |r: usize, c: usize| r * cols + c;
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                pairs.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < rows {
                pairs.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    let edges = pairs.iter().enumerate().flat_map(|(e, &(a, b))| [(e, a), (e, b)]);
    IncidenceGraph::new(rows * cols, pairs.len(), edges).expect("every vertex lies on an edge")
}

/// A pseudo-random graph with `n_red` red and `n_blue` blue nodes, driven by
/// a fixed linear congruential sequence so that every run sees the same input.
pub fn scrambled(n_red: usize, n_blue: usize, seed: u64) -> IncidenceGraph {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state >> 33
    };
    let mut edges = Vec::new();
    for v in 0..n_red {
        edges.push(((next() as usize) % n_blue, v));
        for e in 0..n_blue {
            if next() % 3 == 0 {
                edges.push((e, v));
            }
        }
    }
    IncidenceGraph::new(n_red, n_blue, edges).expect("every red node has a neighbour")
}
