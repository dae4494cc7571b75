//! Constrained 2-hop cover labeling with offline α-domination filtering.
//!
//! Every vertex carries an out-sketch and an in-sketch of
//! `(hub, dist, cost)` entries such that any `(s, t)` query is answerable
//! from `delta_out(s)` and `delta_in(t)` alone. Entries are thinned by
//! α-domination: an entry may be dropped when a retained sibling for the
//! same hub has no larger cost and at most α times its distance. The
//! construction processes vertices as landmarks in descending degree order
//! with pruned bidirectional Pareto searches.
//!
//! The index guarantee, exercised exhaustively by the test suite: for every
//! query `(s, t, theta)`, [`LabelIndex::query`] is feasible exactly when an
//! exact constrained path exists, and its answer is at most α times the
//! exact constrained optimum.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::oracle::CsdQuery;

/// Approximation ratio α ≥ 1 kept as an exact rational so that all
/// domination checks are integer comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: u32,
    den: u32,
}

impl Alpha {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num < den {
            return Err(Error::InvalidAlpha(format!("{num}/{den} is not >= 1")));
        }
        let g = gcd(num, den);
        Ok(Alpha { num: num / g, den: den / g })
    }

    pub fn one() -> Self {
        Alpha { num: 1, den: 1 }
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    /// True iff entry `a` α-dominates entry `b`: `cost(a) <= cost(b)` and
    /// `dist(a) <= α * dist(b)`, evaluated exactly.
    pub fn dominates(&self, a: (u64, u64), b: (u64, u64)) -> bool {
        a.1 <= b.1 && (a.0 as u128) * (self.den as u128) <= (self.num as u128) * (b.0 as u128)
    }

    /// `value <= α * base`, exactly.
    fn within(&self, value: u64, base: u64) -> bool {
        (value as u128) * (self.den as u128) <= (self.num as u128) * (base as u128)
    }
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts `"3/2"` or an integer such as `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::InvalidAlpha(format!("{s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Alpha::new(parse(n)?, parse(d)?),
            None => Alpha::new(parse(s)?, 1),
        }
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One sketch entry: the distance and cost of a concrete path between the
/// owning vertex and `hub`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchEntry {
    pub hub: VertexId,
    pub dist: u64,
    pub cost: u64,
}

/// Construction knobs beyond the approximation ratio.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOpts {
    /// Hard cap on entries per sketch; when exceeded the lowest-cost
    /// entries are kept and a warning is logged. Off by default.
    pub entry_cap: Option<usize>,
}

/// The plaintext 2-hop cover labeling index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelIndex {
    alpha: Alpha,
    delta_out: Vec<Vec<SketchEntry>>,
    delta_in: Vec<Vec<SketchEntry>>,
    labels: Vec<String>,
    max_dist_b: u64,
}

/// Minimal query answer: distance plus the witnessing hub pair cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlainHit {
    pub dist: u64,
    pub cost: u64,
    pub hub: VertexId,
}

/// A cost-feasible hub pair, positions given within the two sketch lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeasiblePair {
    pub hub: VertexId,
    pub out_pos: usize,
    pub in_pos: usize,
    pub dist: u64,
    pub cost: u64,
}

impl LabelIndex {
    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.delta_out.len()
    }

    /// Maximum distance over all entries in both sketch families.
    pub fn max_dist_b(&self) -> u64 {
        self.max_dist_b
    }

    pub fn out_sketch(&self, v: VertexId) -> &[SketchEntry] {
        &self.delta_out[v.index()]
    }

    pub fn in_sketch(&self, v: VertexId) -> &[SketchEntry] {
        &self.delta_in[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn total_out_entries(&self) -> usize {
        self.delta_out.iter().map(Vec::len).sum()
    }

    pub fn total_in_entries(&self) -> usize {
        self.delta_in.iter().map(Vec::len).sum()
    }

    /// Answer a constrained shortest distance query from the sketches
    /// alone: minimum `d1 + d2` over hub pairs with `c1 + c2 <= theta`.
    pub fn query(&self, q: &CsdQuery) -> Option<u64> {
        self.query_detailed(q).map(|hit| hit.dist)
    }

    pub fn query_detailed(&self, q: &CsdQuery) -> Option<PlainHit> {
        let mut best: Option<PlainHit> = None;
        let by_hub = self.in_by_hub(q.t);
        for e1 in &self.delta_out[q.s.index()] {
            let Some(matches) = by_hub.get(&e1.hub) else {
                continue;
            };
            for &(_, d2, c2) in matches {
                if e1.cost + c2 > q.theta {
                    continue;
                }
                let hit = PlainHit { dist: e1.dist + d2, cost: e1.cost + c2, hub: e1.hub };
                let better = match &best {
                    None => true,
                    Some(b) => (hit.dist, hit.cost, hit.hub) < (b.dist, b.cost, b.hub),
                };
                if better {
                    best = Some(hit);
                }
            }
        }
        best
    }

    /// Every hub pair satisfying the budget, for equivalence checking
    /// against the encrypted pipeline.
    pub fn feasible_pairs(&self, s: VertexId, t: VertexId, theta: u64) -> Vec<FeasiblePair> {
        let by_hub = self.in_by_hub(t);
        let mut out = Vec::new();
        for (out_pos, e1) in self.delta_out[s.index()].iter().enumerate() {
            let Some(matches) = by_hub.get(&e1.hub) else {
                continue;
            };
            for &(in_pos, d2, c2) in matches {
                if e1.cost + c2 <= theta {
                    out.push(FeasiblePair {
                        hub: e1.hub,
                        out_pos,
                        in_pos,
                        dist: e1.dist + d2,
                        cost: e1.cost + c2,
                    });
                }
            }
        }
        out
    }

    fn in_by_hub(&self, t: VertexId) -> HashMap<VertexId, Vec<(usize, u64, u64)>> {
        let mut by_hub: HashMap<VertexId, Vec<(usize, u64, u64)>> = HashMap::new();
        for (pos, e) in self.delta_in[t.index()].iter().enumerate() {
            by_hub.entry(e.hub).or_default().push((pos, e.dist, e.cost));
        }
        by_hub
    }

    /// Index file: magic `CNL1`, α as two little-endian u32s, u32 n, the
    /// out sketch of every vertex (u32 count, then `(u32 hub, u32 d,
    /// u32 c)` entries), then the in sketches likewise. External labels are
    /// not stored.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"CNL1")?;
        w.write_all(&self.alpha.num.to_le_bytes())?;
        w.write_all(&self.alpha.den.to_le_bytes())?;
        w.write_all(&(self.n() as u32).to_le_bytes())?;
        for family in [&self.delta_out, &self.delta_in] {
            for sketch in family {
                w.write_all(&(sketch.len() as u32).to_le_bytes())?;
                for e in sketch {
                    let d = u32::try_from(e.dist).map_err(|_| Error::FieldOverflow(e.dist))?;
                    let c = u32::try_from(e.cost).map_err(|_| Error::FieldOverflow(e.cost))?;
                    w.write_all(&e.hub.0.to_le_bytes())?;
                    w.write_all(&d.to_le_bytes())?;
                    w.write_all(&c.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| Error::Truncated)?;
        if &magic != b"CNL1" {
            return Err(Error::BadMagic { expected: "CNL1" });
        }
        let num = read_u32(&mut r)?;
        let den = read_u32(&mut r)?;
        let alpha = Alpha::new(num, den)?;
        let n = read_u32(&mut r)? as usize;
        let mut families = Vec::with_capacity(2);
        for _ in 0..2 {
            let mut family = Vec::with_capacity(n);
            for _ in 0..n {
                let count = read_u32(&mut r)? as usize;
                let mut sketch = Vec::with_capacity(count);
                for _ in 0..count {
                    let hub = read_u32(&mut r)?;
                    let d = read_u32(&mut r)?;
                    let c = read_u32(&mut r)?;
                    if hub as usize >= n {
                        return Err(Error::Malformed {
                            line: 0,
                            msg: format!("hub {hub} outside vertex range 0..{n}"),
                        });
                    }
                    sketch.push(SketchEntry {
                        hub: VertexId(hub),
                        dist: d as u64,
                        cost: c as u64,
                    });
                }
                family.push(sketch);
            }
            families.push(family);
        }
        let mut tail = [0u8; 1];
        if r.read(&mut tail)? != 0 {
            return Err(Error::Truncated);
        }
        let delta_in = families.pop().unwrap();
        let delta_out = families.pop().unwrap();
        let max_dist_b = max_dist(&delta_out, &delta_in);
        Ok(LabelIndex {
            alpha,
            delta_out,
            delta_in,
            labels: (0..n).map(|i| i.to_string()).collect(),
            max_dist_b,
        })
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| Error::Truncated)?;
    Ok(u32::from_le_bytes(buf))
}

fn max_dist(out: &[Vec<SketchEntry>], inn: &[Vec<SketchEntry>]) -> u64 {
    out.iter()
        .chain(inn.iter())
        .flat_map(|s| s.iter())
        .map(|e| e.dist)
        .max()
        .unwrap_or(0)
}

/// Build the index over a weighted graph.
pub fn build_index(g: &Graph, alpha: Alpha) -> Result<LabelIndex> {
    build_index_opts(g, alpha, BuildOpts::default())
}

pub fn build_index_opts(g: &Graph, alpha: Alpha, opts: BuildOpts) -> Result<LabelIndex> {
    Builder::new(g, alpha, opts).run()
}

/// Landmark-order construction. For each landmark (descending degree, ties
/// by index) a forward and a backward Pareto search enumerate frontier
/// labels. A label is pruned, and its expansion stopped, when the partial
/// index already answers the landmark-to-vertex query with a pair of no
/// larger distance and no larger cost; pruning with α slack here would
/// compound across landmarks and void the approximation guarantee. The α
/// slack is spent per (vertex, hub) slot: the frontier staircase is thinned
/// to a subset in which every dropped label keeps a retained sibling of no
/// larger cost and at most α times its distance.
///
/// One further sound skip: when the forward search committed no entry
/// beyond the landmark itself, backward candidates can only ever pair at
/// queries ending at the landmark, so the insertion test for them may use
/// the full α slack against the existing pair set without compounding
/// (expansion still continues).
struct Builder<'g> {
    graph: &'g Graph,
    alpha: Alpha,
    opts: BuildOpts,
    delta_out: Vec<Vec<SketchEntry>>,
    delta_in: Vec<Vec<SketchEntry>>,
    cands: Vec<Vec<(u64, u64)>>,
    touched: Vec<u32>,
    cap_warned: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cover {
    /// A pair bounds both criteria: drop the label and stop expanding.
    Plain,
    /// A pair bounds cost and α-bounds distance: withhold the entry but
    /// keep expanding.
    Alpha,
    None,
}

impl<'g> Builder<'g> {
    fn new(g: &'g Graph, alpha: Alpha, opts: BuildOpts) -> Self {
        let n = g.n();
        Builder {
            graph: g,
            alpha,
            opts,
            delta_out: vec![Vec::new(); n],
            delta_in: vec![Vec::new(); n],
            cands: vec![Vec::new(); n],
            touched: Vec::new(),
            cap_warned: false,
        }
    }

    fn run(mut self) -> Result<LabelIndex> {
        let mut order: Vec<u32> = (0..self.graph.n() as u32).collect();
        order.sort_by_key(|&v| {
            let vid = VertexId(v);
            let deg = self.graph.out(vid).len() + self.graph.incoming(vid).len();
            (std::cmp::Reverse(deg), v)
        });
        for &landmark in &order {
            self.process_landmark(VertexId(landmark))?;
        }
        let max_dist_b = max_dist(&self.delta_out, &self.delta_in);
        Ok(LabelIndex {
            alpha: self.alpha,
            delta_out: self.delta_out,
            delta_in: self.delta_in,
            labels: self.graph.labels().to_vec(),
            max_dist_b,
        })
    }

    fn process_landmark(&mut self, landmark: VertexId) -> Result<()> {
        use crate::oracle::search::{Direction, Search};

        let mut fwd_local_only = false;
        for dir in [Direction::Forward, Direction::Backward] {
            // Forward labels cover landmark-to-vertex paths and land in the
            // in-sketches; backward labels mirror them for the out-sketches.
            let landmark_side = match dir {
                Direction::Forward => group_by_hub(&self.delta_out[landmark.index()]),
                Direction::Backward => group_by_hub(&self.delta_in[landmark.index()]),
            };
            let endpoint_alpha = dir == Direction::Backward && fwd_local_only;
            let mut search = Search::new(self.graph, landmark, dir, None);
            while let Some((v, pos, label)) = search.pop_settle()? {
                if v != landmark {
                    match self.coverage(
                        &landmark_side,
                        v,
                        dir,
                        label.dist,
                        label.cost,
                        endpoint_alpha,
                    ) {
                        Cover::Plain => continue,
                        Cover::Alpha => {
                            search.expand(v, pos)?;
                            continue;
                        }
                        Cover::None => {}
                    }
                }
                if self.cands[v.index()].is_empty() {
                    self.touched.push(v.0);
                }
                self.cands[v.index()].push((label.dist, label.cost));
                search.expand(v, pos)?;
            }
            if dir == Direction::Forward {
                fwd_local_only = self.touched.iter().all(|&v| v == landmark.0);
            }
            self.commit(landmark, dir);
        }
        Ok(())
    }

    /// How well does the partial index already answer the landmark/vertex
    /// query relative to `(dist, cost)`?
    fn coverage(
        &self,
        landmark_side: &HashMap<VertexId, Vec<(u64, u64)>>,
        v: VertexId,
        dir: crate::oracle::search::Direction,
        dist: u64,
        cost: u64,
        endpoint_alpha: bool,
    ) -> Cover {
        use crate::oracle::search::Direction;
        let vertex_side = match dir {
            Direction::Forward => &self.delta_in[v.index()],
            Direction::Backward => &self.delta_out[v.index()],
        };
        let mut best = Cover::None;
        for e in vertex_side {
            let Some(pairs) = landmark_side.get(&e.hub) else {
                continue;
            };
            for &(d1, c1) in pairs {
                if c1 + e.cost > cost {
                    continue;
                }
                if d1 + e.dist <= dist {
                    return Cover::Plain;
                }
                if endpoint_alpha && self.alpha.within(d1 + e.dist, dist) {
                    best = Cover::Alpha;
                }
            }
        }
        best
    }

    /// Reduce each touched vertex's candidate staircase to an α-cover and
    /// append the surviving entries under the landmark hub.
    fn commit(&mut self, landmark: VertexId, dir: crate::oracle::search::Direction) {
        use crate::oracle::search::Direction;
        self.touched.sort_unstable();
        for &v in &self.touched {
            let cands = std::mem::take(&mut self.cands[v as usize]);
            let kept = alpha_cover(&cands, self.alpha);
            let sketch = match dir {
                Direction::Forward => &mut self.delta_in[v as usize],
                Direction::Backward => &mut self.delta_out[v as usize],
            };
            sketch.extend(kept.iter().map(|&(dist, cost)| SketchEntry {
                hub: landmark,
                dist,
                cost,
            }));
            if let Some(cap) = self.opts.entry_cap {
                if sketch.len() > cap {
                    if !self.cap_warned {
                        log::warn!(
                            "sketch of vertex {v} exceeded the entry cap {cap}; \
                             keeping lowest-cost entries"
                        );
                        self.cap_warned = true;
                    }
                    sketch.sort_by_key(|e| (e.cost, e.dist, e.hub));
                    sketch.truncate(cap);
                }
            }
        }
        self.touched.clear();
    }
}

fn group_by_hub(entries: &[SketchEntry]) -> HashMap<VertexId, Vec<(u64, u64)>> {
    let mut map: HashMap<VertexId, Vec<(u64, u64)>> = HashMap::new();
    for e in entries {
        map.entry(e.hub).or_default().push((e.dist, e.cost));
    }
    map
}

/// Select a minimal subset of a frontier staircase (distance strictly
/// ascending, cost strictly descending) such that every input label has a
/// selected label with no larger cost and at most α times its distance.
/// Scanning from the largest distance downward and keeping the first
/// uncovered label yields both minimality and the invariant that no kept
/// entry α-dominates another.
fn alpha_cover(staircase: &[(u64, u64)], alpha: Alpha) -> Vec<(u64, u64)> {
    let mut kept = Vec::new();
    let mut i = staircase.len();
    while i > 0 {
        let s = staircase[i - 1];
        kept.push(s);
        let mut j = i - 1;
        while j > 0 && alpha.within(s.0, staircase[j - 1].0) {
            j -= 1;
        }
        i = j;
    }
    kept.reverse();
    kept
}
