//! Directed graph with per-edge (distance, cost) attributes.
//!
//! Graphs are ingested from SNAP-style edge lists (`u v` or `u v d c` per
//! line, `#` comments), re-indexed densely, and optionally given synthetic
//! uniform weights from a seeded generator. Once built a graph is immutable
//! and safe to share across threads.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense vertex index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Per-edge attributes: a distance and a cost, both non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeAttr {
    pub dist: u32,
    pub cost: u32,
}

/// Parameters for synthetic weight generation.
///
/// Both attributes are drawn independently and uniformly from `lo..=hi`,
/// edge by edge in ascending `(u, v)` order, so a given seed always yields
/// the same weighted graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightSpec {
    pub seed: u64,
    pub lo: u32,
    pub hi: u32,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { seed: 0, lo: 1, hi: 100 }
    }
}

impl WeightSpec {
    pub fn new(seed: u64, lo: u32, hi: u32) -> Result<Self> {
        if lo < 1 || lo > hi {
            return Err(Error::Malformed {
                line: 0,
                msg: format!("weight range [{lo}, {hi}] must satisfy 1 <= lo <= hi"),
            });
        }
        Ok(WeightSpec { seed, lo, hi })
    }
}

/// Immutable directed graph. `out_adj` and `in_adj` describe the same edge
/// set; adjacency lists are sorted by neighbor index; duplicate `(u, v)`
/// edges are collapsed to the first occurrence at ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    out_adj: Vec<Vec<(VertexId, EdgeAttr)>>,
    in_adj: Vec<Vec<(VertexId, EdgeAttr)>>,
    labels: Vec<String>,
    label_to_id: HashMap<String, u32>,
    m: usize,
}

impl Graph {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out(&self, v: VertexId) -> &[(VertexId, EdgeAttr)] {
        &self.out_adj[v.index()]
    }

    pub fn incoming(&self, v: VertexId) -> &[(VertexId, EdgeAttr)] {
        &self.in_adj[v.index()]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.labels.len() as u32).map(VertexId)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_to_id.get(label).copied().map(VertexId)
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<EdgeAttr> {
        let list = &self.out_adj[u.index()];
        list.binary_search_by_key(&v, |&(nb, _)| nb)
            .ok()
            .map(|i| list[i].1)
    }

    /// Edges in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, EdgeAttr)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(move |&(v, attr)| (VertexId(u as u32), v, attr))
        })
    }

    /// Build a graph from explicit parts. Labels default to decimal indices
    /// when `labels` is `None`.
    pub fn from_edges(
        n: usize,
        edges: &[(u32, u32, EdgeAttr)],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let labels = match labels {
            Some(l) => {
                assert_eq!(l.len(), n, "label table must cover every vertex");
                l
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut builder = GraphBuilder::with_labels(labels);
        for &(u, v, attr) in edges {
            if u == v {
                return Err(Error::SelfLoop { line: 0, label: u.to_string() });
            }
            builder.add_edge(VertexId(u), VertexId(v), attr);
        }
        Ok(builder.finish())
    }

    /// Parse a SNAP-style edge list. Lines starting with `#` are comments;
    /// blank lines are ignored. With `has_weights` each line is
    /// `u v dist cost`, otherwise `u v` with zero placeholder attributes.
    pub fn parse_edge_list<R: BufRead>(reader: R, has_weights: bool) -> Result<Self> {
        Self::parse_edge_list_opts(reader, has_weights, false)
    }

    /// Like [`Graph::parse_edge_list`], with `undirected` modeling each input
    /// line as two opposite arcs.
    pub fn parse_edge_list_opts<R: BufRead>(
        reader: R,
        has_weights: bool,
        undirected: bool,
    ) -> Result<Self> {
        let mut builder = GraphBuilder::new();
        for (lineno, line) in reader.lines().enumerate() {
            let lineno = lineno + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let expected = if has_weights { 4 } else { 2 };
            if tokens.len() != expected {
                return Err(Error::Malformed {
                    line: lineno,
                    msg: format!("expected {expected} fields, found {}", tokens.len()),
                });
            }
            let (u_label, v_label) = (tokens[0], tokens[1]);
            if u_label == v_label {
                return Err(Error::SelfLoop { line: lineno, label: u_label.to_string() });
            }
            let attr = if has_weights {
                EdgeAttr {
                    dist: parse_weight(tokens[2], lineno)?,
                    cost: parse_weight(tokens[3], lineno)?,
                }
            } else {
                EdgeAttr::default()
            };
            let u = builder.intern(u_label);
            let v = builder.intern(v_label);
            builder.add_edge(u, v, attr);
            if undirected {
                builder.add_edge(v, u, attr);
            }
        }
        Ok(builder.finish())
    }

    /// Redraw every edge attribute from a seeded uniform stream. Topology
    /// and labels are preserved; the same `(graph, spec)` always produces
    /// the same output.
    pub fn synthesize_weights(&self, spec: &WeightSpec) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut edges = Vec::with_capacity(self.m);
        for (u, v, _) in self.edges() {
            let dist = rng.random_range(spec.lo..=spec.hi);
            let cost = rng.random_range(spec.lo..=spec.hi);
            edges.push((u.0, v.0, EdgeAttr { dist, cost }));
        }
        Graph::from_edges(self.n(), &edges, Some(self.labels.clone()))
            .expect("re-weighting preserves well-formedness")
    }

    /// Sum `(dist, cost)` along a vertex sequence, reporting the first
    /// missing hop.
    pub fn path_metrics(&self, path: &[VertexId]) -> Result<(u64, u64)> {
        let mut dist: u64 = 0;
        let mut cost: u64 = 0;
        for hop in path.windows(2) {
            let attr = self.edge(hop[0], hop[1]).ok_or_else(|| Error::MissingEdge {
                from: self.label(hop[0]).to_string(),
                to: self.label(hop[1]).to_string(),
            })?;
            dist = dist.checked_add(attr.dist as u64).ok_or(Error::Overflow)?;
            cost = cost.checked_add(attr.cost as u64).ok_or(Error::Overflow)?;
        }
        Ok((dist, cost))
    }

    /// Emit the graph as an edge-list text document that
    /// [`Graph::parse_edge_list`] maps back to an identical graph.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for (u, v, attr) in self.edges() {
            writeln!(w, "{} {} {} {}", self.label(u), self.label(v), attr.dist, attr.cost)?;
        }
        Ok(())
    }

    /// Binary cache: magic `CNR1`, little-endian u32 n, u32 m, then one
    /// `(u32, u32, u32, u32)` record per edge in ascending `(u, v)` order.
    /// External labels are not stored; vertices of a reloaded graph are
    /// labeled by their decimal index.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"CNR1")?;
        w.write_all(&(self.n() as u32).to_le_bytes())?;
        w.write_all(&(self.m() as u32).to_le_bytes())?;
        for (u, v, attr) in self.edges() {
            w.write_all(&u.0.to_le_bytes())?;
            w.write_all(&v.0.to_le_bytes())?;
            w.write_all(&attr.dist.to_le_bytes())?;
            w.write_all(&attr.cost.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| Error::Truncated)?;
        if &magic != b"CNR1" {
            return Err(Error::BadMagic { expected: "CNR1" });
        }
        let n = read_u32(&mut r)? as usize;
        let m = read_u32(&mut r)? as usize;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = read_u32(&mut r)?;
            let v = read_u32(&mut r)?;
            let dist = read_u32(&mut r)?;
            let cost = read_u32(&mut r)?;
            if u as usize >= n || v as usize >= n {
                return Err(Error::Malformed {
                    line: 0,
                    msg: format!("edge ({u}, {v}) outside vertex range 0..{n}"),
                });
            }
            edges.push((u, v, EdgeAttr { dist, cost }));
        }
        let mut tail = [0u8; 1];
        if r.read(&mut tail)? != 0 {
            return Err(Error::Truncated);
        }
        Graph::from_edges(n, &edges, None)
    }
}

fn parse_weight(token: &str, line: usize) -> Result<u32> {
    if token.starts_with('-') {
        return Err(Error::NegativeWeight { line, token: token.to_string() });
    }
    token.parse::<u32>().map_err(|e| Error::Malformed {
        line,
        msg: format!("bad weight {token:?}: {e}"),
    })
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| Error::Truncated)?;
    Ok(u32::from_le_bytes(buf))
}

struct GraphBuilder {
    labels: Vec<String>,
    label_to_id: HashMap<String, u32>,
    edges: HashMap<(u32, u32), EdgeAttr>,
    order: Vec<(u32, u32)>,
}

impl GraphBuilder {
    fn new() -> Self {
        GraphBuilder {
            labels: Vec::new(),
            label_to_id: HashMap::new(),
            edges: HashMap::new(),
            order: Vec::new(),
        }
    }

    fn with_labels(labels: Vec<String>) -> Self {
        let label_to_id = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        GraphBuilder { labels, label_to_id, edges: HashMap::new(), order: Vec::new() }
    }

    fn intern(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.label_to_id.get(label) {
            return VertexId(id);
        }
        let id = self.labels.len() as u32;
        self.labels.push(label.to_string());
        self.label_to_id.insert(label.to_string(), id);
        VertexId(id)
    }

    fn add_edge(&mut self, u: VertexId, v: VertexId, attr: EdgeAttr) {
        // First occurrence wins.
        if let std::collections::hash_map::Entry::Vacant(e) = self.edges.entry((u.0, v.0)) {
            e.insert(attr);
            self.order.push((u.0, v.0));
        }
    }

    fn finish(mut self) -> Graph {
        let n = self.labels.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        self.order.sort_unstable();
        for &(u, v) in &self.order {
            let attr = self.edges[&(u, v)];
            out_adj[u as usize].push((VertexId(v), attr));
            in_adj[v as usize].push((VertexId(u), attr));
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable_by_key(|&(nb, _)| nb);
        }
        let m = self.order.len();
        Graph { out_adj, in_adj, labels: self.labels, label_to_id: self.label_to_id, m }
    }
}
