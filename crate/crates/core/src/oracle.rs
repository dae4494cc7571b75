//! Exact constrained shortest distances via bicriteria label-correcting
//! search.
//!
//! This is the ground truth the approximate index is measured against: a
//! Pareto search over `(dist, cost)` labels with a min-heap keyed by
//! `(dist, cost, vertex)`, pruning labels dominated at their vertex and,
//! optionally, labels whose cost exceeds the query budget. Worst-case label
//! counts are exponential, which is acceptable at the graph sizes this
//! toolkit targets.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Non-dominated `(dist, cost)` pair for one source/target pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParetoLabel {
    pub dist: u64,
    pub cost: u64,
}

/// A constrained shortest distance query: minimize path distance from `s`
/// to `t` subject to total path cost at most `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsdQuery {
    pub s: VertexId,
    pub t: VertexId,
    pub theta: u64,
}

impl CsdQuery {
    pub fn new(s: VertexId, t: VertexId, theta: u64) -> Result<Self> {
        if s == t {
            return Err(Error::Malformed {
                line: 0,
                msg: format!("query origin and destination coincide ({s})"),
            });
        }
        Ok(CsdQuery { s, t, theta })
    }
}

pub(crate) mod search {
    //! Shared Pareto search engine. Settling and expansion are separate
    //! steps so the labeling construction can prune a settled label before
    //! it propagates.

    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    use crate::error::{Error, Result};
    use crate::graph::{Graph, VertexId};

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub(crate) enum Direction {
        Forward,
        Backward,
    }

    #[derive(Debug, Clone, Copy)]
    pub(crate) struct Settled {
        pub dist: u64,
        pub cost: u64,
        pub parent: Option<(u32, u32)>,
    }

    /// Settled labels at each vertex form the non-dominated frontier in
    /// order of strictly increasing distance and strictly decreasing cost.
    pub(crate) struct Search<'g> {
        graph: &'g Graph,
        dir: Direction,
        cost_cap: Option<u64>,
        pub(crate) settled: Vec<Vec<Settled>>,
        best_cost: Vec<u64>,
        heap: BinaryHeap<Reverse<(u64, u64, u32, Option<(u32, u32)>)>>,
    }

    impl<'g> Search<'g> {
        pub(crate) fn new(
            graph: &'g Graph,
            source: VertexId,
            dir: Direction,
            cost_cap: Option<u64>,
        ) -> Self {
            let n = graph.n();
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0, 0, source.0, None)));
            Search {
                graph,
                dir,
                cost_cap,
                settled: vec![Vec::new(); n],
                best_cost: vec![u64::MAX; n],
                heap,
            }
        }

        /// Pop the next non-dominated label and record it, without
        /// expanding. Returns the vertex, the label's position in its
        /// frontier, and the label itself.
        pub(crate) fn pop_settle(&mut self) -> Result<Option<(VertexId, u32, Settled)>> {
            while let Some(Reverse((dist, cost, v, parent))) = self.heap.pop() {
                let vi = v as usize;
                // Labels pop in (dist, cost) order, so an earlier settled
                // label at v dominates iff its cost is not larger.
                if cost >= self.best_cost[vi] {
                    continue;
                }
                self.best_cost[vi] = cost;
                let label = Settled { dist, cost, parent };
                self.settled[vi].push(label);
                let pos = (self.settled[vi].len() - 1) as u32;
                return Ok(Some((VertexId(v), pos, label)));
            }
            Ok(None)
        }

        /// Relax the edges out of a settled label.
        pub(crate) fn expand(&mut self, v: VertexId, pos: u32) -> Result<()> {
            let Settled { dist, cost, .. } = self.settled[v.index()][pos as usize];
            let edges = match self.dir {
                Direction::Forward => self.graph.out(v),
                Direction::Backward => self.graph.incoming(v),
            };
            for &(nb, attr) in edges {
                let nd = dist.checked_add(attr.dist as u64).ok_or(Error::Overflow)?;
                let nc = cost.checked_add(attr.cost as u64).ok_or(Error::Overflow)?;
                if let Some(cap) = self.cost_cap {
                    if nc > cap {
                        continue;
                    }
                }
                if nc >= self.best_cost[nb.index()] {
                    continue;
                }
                self.heap.push(Reverse((nd, nc, nb.0, Some((v.0, pos)))));
            }
            Ok(())
        }

        pub(crate) fn run(&mut self) -> Result<()> {
            while let Some((v, pos, _)) = self.pop_settle()? {
                self.expand(v, pos)?;
            }
            Ok(())
        }

        /// Reconstruct the witness path for the `pos`-th settled label at
        /// `v`, oriented source-to-target for forward searches.
        pub(crate) fn witness(&self, v: VertexId, pos: usize) -> Vec<VertexId> {
            let mut path = vec![v];
            let mut cur = self.settled[v.index()][pos];
            while let Some((pv, ppos)) = cur.parent {
                path.push(VertexId(pv));
                cur = self.settled[pv as usize][ppos as usize];
            }
            if matches!(self.dir, Direction::Forward) {
                path.reverse();
            }
            path
        }
    }
}

use search::{Direction, Search};

/// Exact constrained shortest distance, or `None` when no path from `q.s`
/// to `q.t` satisfies the budget.
pub fn exact_csd(g: &Graph, q: &CsdQuery) -> Result<Option<u64>> {
    let mut search = Search::new(g, q.s, Direction::Forward, Some(q.theta));
    while let Some((v, pos, label)) = search.pop_settle()? {
        if v == q.t {
            // First settle at t has minimal distance among budget-feasible
            // labels.
            return Ok(Some(label.dist));
        }
        search.expand(v, pos)?;
    }
    Ok(None)
}

/// All non-dominated `(dist, cost)` pairs over `s -> t` paths, in order of
/// increasing distance.
pub fn pareto_frontier(g: &Graph, s: VertexId, t: VertexId) -> Result<Vec<ParetoLabel>> {
    let mut search = Search::new(g, s, Direction::Forward, None);
    search.run()?;
    Ok(search.settled[t.index()]
        .iter()
        .map(|l| ParetoLabel { dist: l.dist, cost: l.cost })
        .collect())
}

/// Frontiers from `s` to every vertex in one sweep. The result at index
/// `t` equals `pareto_frontier(g, s, t)`.
pub fn pareto_frontier_all(g: &Graph, s: VertexId) -> Result<Vec<Vec<ParetoLabel>>> {
    let mut search = Search::new(g, s, Direction::Forward, None);
    search.run()?;
    Ok(search
        .settled
        .iter()
        .map(|labels| {
            labels
                .iter()
                .map(|l| ParetoLabel { dist: l.dist, cost: l.cost })
                .collect()
        })
        .collect())
}

/// Frontier labels together with one witness path realizing each label.
pub fn pareto_frontier_with_paths(
    g: &Graph,
    s: VertexId,
    t: VertexId,
) -> Result<Vec<(ParetoLabel, Vec<VertexId>)>> {
    let mut search = Search::new(g, s, Direction::Forward, None);
    search.run()?;
    Ok(search.settled[t.index()]
        .iter()
        .enumerate()
        .map(|(pos, l)| {
            (
                ParetoLabel { dist: l.dist, cost: l.cost },
                search.witness(t, pos),
            )
        })
        .collect())
}

/// Query-budget bounds for an `(s, t)` pair: `c_min` is the cheapest cost
/// of any path, `c_max` the cheapest cost among paths achieving the
/// unconstrained shortest distance. `None` when `t` is unreachable.
pub fn cost_bounds(g: &Graph, s: VertexId, t: VertexId) -> Result<Option<(u64, u64)>> {
    let frontier = pareto_frontier(g, s, t)?;
    if frontier.is_empty() {
        return Ok(None);
    }
    // The frontier is a staircase: distance ascending, cost descending.
    let c_max = frontier.first().unwrap().cost;
    let c_min = frontier.last().unwrap().cost;
    debug_assert!(c_min <= c_max);
    Ok(Some((c_min, c_max)))
}
