//! Seeded synthetic graph generators for the benchmark suite.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeAttr, Graph, WeightSpec};

/// A dataset the bench config can name: a random topology or an edge-list
/// file. Weights are synthesized separately so one topology can be reused
/// across weight seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    ErdosRenyi { n: u32, avg_degree: f64, seed: u64 },
    SmallWorld { n: u32, neighbors: u32, rewire: f64, seed: u64 },
    File { path: String, has_weights: bool },
}

impl DatasetSpec {
    pub fn name(&self) -> String {
        match self {
            DatasetSpec::ErdosRenyi { n, avg_degree, seed } => {
                format!("er-n{n}-d{avg_degree}-s{seed}")
            }
            DatasetSpec::SmallWorld { n, neighbors, rewire, seed } => {
                format!("ws-n{n}-k{neighbors}-p{rewire}-s{seed}")
            }
            DatasetSpec::File { path, .. } => path.clone(),
        }
    }

    /// Materialize the topology (weights zeroed unless the file carries
    /// them).
    pub fn build(&self) -> Result<Graph> {
        match self {
            DatasetSpec::ErdosRenyi { n, avg_degree, seed } => {
                erdos_renyi(*n, *avg_degree, *seed)
            }
            DatasetSpec::SmallWorld { n, neighbors, rewire, seed } => {
                small_world(*n, *neighbors, *rewire, *seed)
            }
            DatasetSpec::File { path, has_weights } => {
                let file = std::fs::File::open(path)?;
                Graph::parse_edge_list(std::io::BufReader::new(file), *has_weights)
            }
        }
    }

    /// Topology plus uniform weights.
    pub fn build_weighted(&self, weights: &WeightSpec) -> Result<Graph> {
        let g = self.build()?;
        match self {
            DatasetSpec::File { has_weights: true, .. } => Ok(g),
            _ => Ok(g.synthesize_weights(weights)),
        }
    }
}

/// Directed G(n, m) with m ~= n * avg_degree distinct non-loop edges.
pub fn erdos_renyi(n: u32, avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Malformed { line: 0, msg: "need at least two vertices".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = n as u64 * (n as u64 - 1);
    let m = ((n as f64 * avg_degree).round() as u64).min(max_edges);
    let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(m as usize);
    let mut edges = Vec::with_capacity(m as usize);
    while (edges.len() as u64) < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && chosen.insert((u, v)) {
            edges.push((u, v, EdgeAttr::default()));
        }
    }
    Graph::from_edges(n as usize, &edges, None)
}

/// Directed ring lattice with `neighbors` successors per vertex, each arc
/// rewired to a random target with probability `rewire`.
pub fn small_world(n: u32, neighbors: u32, rewire: f64, seed: u64) -> Result<Graph> {
    if n < 3 || neighbors == 0 || neighbors as u64 >= n as u64 {
        return Err(Error::Malformed {
            line: 0,
            msg: format!("bad small-world parameters n={n}, k={neighbors}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: HashSet<(u32, u32)> = HashSet::new();
    let mut edges = Vec::new();
    for u in 0..n {
        for step in 1..=neighbors {
            let mut v = (u + step) % n;
            if rng.random_bool(rewire) {
                let candidate = rng.random_range(0..n);
                if candidate != u && !chosen.contains(&(u, candidate)) {
                    v = candidate;
                }
            }
            if chosen.insert((u, v)) {
                edges.push((u, v, EdgeAttr::default()));
            }
        }
    }
    Graph::from_edges(n as usize, &edges, None)
}
