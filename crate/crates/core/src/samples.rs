//! Small hand-built graphs used across tests and documentation.

use crate::graph::{EdgeAttr, Graph};

/// Five-vertex routing sample with two-criteria edges, labeled `a`..`e`.
///
/// Useful reference facts (all derivable with the oracle):
/// - exact constrained shortest distance `a -> c` at budget 4 is 6 via
///   `(a, b, c)`;
/// - `(a, e, b, c)` has distance 8 and cost 3;
/// - the unconstrained shortest distance `a -> c` is 5, through `e`;
/// - `e -> c` admits both the direct edge `(2, 6)` and the detour
///   `(e, b, c)` with `(3, 2)`.
pub fn routing_sample() -> Graph {
    let labels = ["a", "b", "c", "d", "e"];
    let edges = [
        ("a", "b", 4, 3),
        ("a", "e", 5, 1),
        ("a", "d", 1, 2),
        ("d", "e", 2, 3),
        ("e", "b", 1, 1),
        ("e", "c", 2, 6),
        ("b", "c", 2, 1),
    ];
    let idx = |l: &str| labels.iter().position(|&x| x == l).unwrap() as u32;
    let edges: Vec<(u32, u32, EdgeAttr)> = edges
        .iter()
        .map(|&(u, v, d, c)| (idx(u), idx(v), EdgeAttr { dist: d, cost: c }))
        .collect();
    Graph::from_edges(
        labels.len(),
        &edges,
        Some(labels.iter().map(|s| s.to_string()).collect()),
    )
    .expect("sample graph is well-formed")
}
