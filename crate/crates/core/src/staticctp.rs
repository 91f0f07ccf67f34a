//! Exact solver for the static Canadian Traveller game.
//!
//! On Traveller's first visit to a vertex, Blocker fixes the status of every
//! undecided edge there, and statuses never change afterwards. Traveller
//! remembers both blocked and open edges. Between two first visits Traveller
//! only moves over known-open edges through visited vertices, so a move is
//! summarised as the shortest such route to the target or to a new vertex.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeStatus, StaticGraph, Vertex};
use crate::instance::Instance;

/// When an edge's status becomes known.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Discovery {
    /// On first visit to either endpoint.
    #[default]
    Incident,
    /// On first visit to its tail; directed graphs only.
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StaticOptions {
    pub discovery: Discovery,
    /// Cap on memoised states; `None` removes it.
    pub max_states: Option<usize>,
}

impl Default for StaticOptions {
    fn default() -> Self {
        StaticOptions { discovery: Discovery::Incident, max_states: Some(10_000_000) }
    }
}

/// Traveller's knowledge during a static game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaticInfoState {
    pub position: Vertex,
    pub visited: Vec<bool>,
    pub statuses: Vec<EdgeStatus>,
    pub budget_used: u32,
}

impl StaticInfoState {
    pub fn initial(g: &StaticGraph, s: Vertex) -> Self {
        StaticInfoState {
            position: s,
            visited: vec![false; g.vertex_count()],
            statuses: vec![EdgeStatus::Unknown; g.edges().len()],
            budget_used: 0,
        }
    }
}

type Key = (Vertex, FixedBitSet, FixedBitSet, u32);

/// A result that is exact, or only a lower bound when the search was cut off.
#[derive(Clone, Copy, Debug)]
struct Bounded {
    value: Cost,
    exact: bool,
}

pub struct StaticSolver<'a> {
    g: &'a StaticGraph,
    s: Vertex,
    t: Vertex,
    k: u32,
    opts: StaticOptions,
    /// Distance to the target with every edge open; an admissible estimate.
    h: Vec<Cost>,
    memo: HashMap<Key, Bounded>,
}

impl<'a> StaticSolver<'a> {
    pub fn new(inst: &'a Instance, opts: StaticOptions) -> Result<Self> {
        let g = inst.static_graph()?;
        if opts.discovery == Discovery::Tail && !g.is_directed() {
            return Err(Error::InvalidArgument("tail discovery needs a directed graph".into()));
        }
        let h = distances_to(g, inst.target);
        Ok(StaticSolver { g, s: inst.source, t: inst.target, k: inst.k, opts, h, memo: HashMap::new() })
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }

    fn decided(&self, e: EdgeId, visited: &FixedBitSet) -> bool {
        let edge = self.g.edge(e);
        match self.opts.discovery {
            Discovery::Incident => visited[edge.u] || visited[edge.v],
            Discovery::Tail => visited[edge.u],
        }
    }

    /// Edges whose status is fixed when `v` is first visited.
    fn fresh(&self, v: Vertex, visited: &FixedBitSet) -> Vec<EdgeId> {
        let pool = match self.opts.discovery {
            Discovery::Incident => self.g.incident(v),
            Discovery::Tail => self.g.out(v),
        };
        pool.iter().copied().filter(|&e| !self.decided(e, visited)).collect()
    }

    /// Shortest routes from `pos` over known-open edges whose inner vertices are
    /// visited. Returns distances and the predecessor edge of every vertex reached.
    fn routes(&self, pos: Vertex, visited: &FixedBitSet, blocked: &FixedBitSet) -> (Vec<Cost>, Vec<Option<EdgeId>>) {
        let n = self.g.vertex_count();
        let mut dist = vec![Cost::UNREACHABLE; n];
        let mut pred = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[pos] = Cost::ZERO;
        heap.push(Reverse((Cost::ZERO, pos)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > dist[x] || (x != pos && (!visited[x] || x == self.t)) {
                continue;
            }
            for &e in self.g.out(x) {
                if blocked[e] || !self.decided(e, visited) {
                    continue;
                }
                let y = self.g.edge(e).other(x);
                let nd = d + self.g.edge(e).weight;
                if nd < dist[y] || (nd == dist[y] && pred[y].is_some_and(|p| e < p)) {
                    dist[y] = nd;
                    pred[y] = Some(e);
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        (dist, pred)
    }

    /// Full-block subsets of `fresh` within budget, largest totals first.
    fn reveals(&self, fresh: &[EdgeId], remaining: u32) -> Vec<(u32, Vec<EdgeId>)> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(
            g: &StaticGraph,
            fresh: &[EdgeId],
            i: usize,
            left: u32,
            used: u32,
            stack: &mut Vec<EdgeId>,
            out: &mut Vec<(u32, Vec<EdgeId>)>,
        ) {
            if i == fresh.len() {
                out.push((used, stack.clone()));
                return;
            }
            rec(g, fresh, i + 1, left, used, stack, out);
            let c = g.edge(fresh[i]).copies;
            if c <= left {
                stack.push(fresh[i]);
                rec(g, fresh, i + 1, left - c, used + c, stack, out);
                stack.pop();
            }
        }
        rec(self.g, fresh, 0, remaining, 0, &mut stack, &mut out);
        out.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        out
    }

    /// Value of Traveller's first arrival at `pos`, Blocker to reveal.
    fn arrive(
        &mut self,
        pos: Vertex,
        visited: &FixedBitSet,
        blocked: &FixedBitSet,
        remaining: u32,
        bound: Cost,
    ) -> Result<Bounded> {
        if pos == self.t {
            return Ok(Bounded { value: Cost::ZERO, exact: true });
        }
        let key = (pos, visited.clone(), blocked.clone(), remaining);
        if let Some(&b) = self.memo.get(&key) {
            if b.exact || b.value >= bound {
                return Ok(b);
            }
        }
        let fresh = self.fresh(pos, visited);
        let mut seen = visited.clone();
        seen.insert(pos);
        let mut worst = Bounded { value: Cost::ZERO, exact: true };
        for (cost, set) in self.reveals(&fresh, remaining) {
            let mut now = blocked.clone();
            for &e in &set {
                now.insert(e);
            }
            let child = self.travel(pos, &seen, &now, remaining - cost, bound)?;
            if child.value > worst.value {
                worst.value = child.value;
            }
            worst.exact &= child.exact;
            if child.value >= bound && child.value.is_finite() {
                // cut off: Blocker already forces at least `bound`
                worst.exact = false;
                break;
            }
            if !child.value.is_finite() {
                worst = Bounded { value: Cost::UNREACHABLE, exact: true };
                break;
            }
        }
        if let Some(limit) = self.opts.max_states {
            if self.memo.len() >= limit {
                return Err(Error::SizeLimit(format!("{limit} knowledge states")));
            }
        }
        self.memo.insert(key, worst);
        Ok(worst)
    }

    /// Value of Traveller's turn at `pos` after the reveal there.
    fn travel(
        &mut self,
        pos: Vertex,
        visited: &FixedBitSet,
        blocked: &FixedBitSet,
        remaining: u32,
        bound: Cost,
    ) -> Result<Bounded> {
        let (dist, _) = self.routes(pos, visited, blocked);
        let mut best = dist[self.t];
        let mut lower = best;
        let mut all_exact = true;
        let mut options: Vec<(Cost, Cost, Vertex)> = (0..self.g.vertex_count())
            .filter(|&u| !visited[u] && u != self.t && dist[u].is_finite())
            .map(|u| (dist[u] + self.h[u], dist[u], u))
            .collect();
        options.sort();
        for (estimate, d, u) in options {
            if !estimate.is_finite() {
                break;
            }
            let cap = best.min(bound);
            if estimate >= cap {
                lower = lower.min(estimate);
                all_exact = false;
                break;
            }
            let inner_bound = match (cap.value(), d.value()) {
                (Some(c), Some(d)) => Cost::new(c - d),
                _ => Cost::UNREACHABLE,
            };
            let child = self.arrive(u, visited, blocked, remaining, inner_bound)?;
            let total = d + child.value;
            lower = lower.min(total);
            if child.exact {
                best = best.min(total);
            } else {
                all_exact = false;
            }
        }
        if best < bound {
            return Ok(Bounded { value: best, exact: true });
        }
        Ok(Bounded { value: lower, exact: all_exact })
    }

    fn bitsets(&self, state: &StaticInfoState) -> (FixedBitSet, FixedBitSet) {
        let mut visited = FixedBitSet::with_capacity(self.g.vertex_count());
        for (v, &b) in state.visited.iter().enumerate() {
            visited.set(v, b);
        }
        let mut blocked = FixedBitSet::with_capacity(self.g.edges().len());
        for (e, st) in state.statuses.iter().enumerate() {
            if matches!(st, EdgeStatus::Revealed(b) if *b >= self.g.edge(e).copies) {
                blocked.insert(e);
            }
        }
        (visited, blocked)
    }

    /// Exact game value from the start.
    pub fn value(&mut self) -> Result<Cost> {
        let visited = FixedBitSet::with_capacity(self.g.vertex_count());
        let blocked = FixedBitSet::with_capacity(self.g.edges().len());
        Ok(self.arrive(self.s, &visited, &blocked, self.k, Cost::UNREACHABLE)?.value)
    }

    /// Whether Traveller can guarantee total length at most `deadline`.
    pub fn wins_within(&mut self, deadline: u64) -> Result<bool> {
        let visited = FixedBitSet::with_capacity(self.g.vertex_count());
        let blocked = FixedBitSet::with_capacity(self.g.edges().len());
        let bound = Cost::new(deadline.saturating_add(1).min(u64::MAX - 1));
        let r = self.arrive(self.s, &visited, &blocked, self.k, bound)?;
        Ok(r.value < bound)
    }

    /// Exact value of a state taken after the reveal at its position.
    pub fn state_value(&mut self, state: &StaticInfoState) -> Result<Cost> {
        let (visited, blocked) = self.bitsets(state);
        let remaining = self.k.saturating_sub(state.budget_used);
        Ok(self.travel(state.position, &visited, &blocked, remaining, Cost::UNREACHABLE)?.value)
    }

    /// An optimal route from `state` (after the reveal at its position) to the
    /// target or to the next unvisited vertex, as a list of edges.
    pub fn traveller_plan(&mut self, state: &StaticInfoState) -> Result<Option<Vec<EdgeId>>> {
        let (visited, blocked) = self.bitsets(state);
        let remaining = self.k.saturating_sub(state.budget_used);
        let (dist, pred) = self.routes(state.position, &visited, &blocked);
        let mut best = (dist[self.t], self.t);
        for u in 0..self.g.vertex_count() {
            if visited[u] || u == self.t || !dist[u].is_finite() {
                continue;
            }
            let child = self.arrive(u, &visited, &blocked, remaining, Cost::UNREACHABLE)?;
            let total = dist[u] + child.value;
            if total < best.0 {
                best = (total, u);
            }
        }
        if !best.0.is_finite() {
            return Ok(None);
        }
        let mut path = Vec::new();
        let mut at = best.1;
        while at != state.position {
            let e = pred[at].expect("reached vertices have a predecessor");
            path.push(e);
            at = self.g.edge(e).other(at);
        }
        path.reverse();
        Ok(Some(path))
    }

    /// Blocker's reveal on Traveller's first arrival described by `state`:
    /// the feasible full-block set maximising the game value.
    pub fn blocker_choice(&mut self, state: &StaticInfoState) -> Result<Vec<EdgeId>> {
        let (visited, blocked) = self.bitsets(state);
        let remaining = self.k.saturating_sub(state.budget_used);
        let v = state.position;
        let fresh = self.fresh(v, &visited);
        let mut seen = visited.clone();
        seen.insert(v);
        let mut best: Option<(Cost, Vec<EdgeId>)> = None;
        let mut reveals = self.reveals(&fresh, remaining);
        reveals.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        for (cost, set) in reveals {
            let mut now = blocked.clone();
            for &e in &set {
                now.insert(e);
            }
            let value = self.travel(v, &seen, &now, remaining - cost, Cost::UNREACHABLE)?.value;
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, set));
            }
        }
        Ok(best.map(|(_, s)| s).unwrap_or_default())
    }

    /// Edges decided on a first visit to `v` given the knowledge in `state`.
    pub fn revealed_on_visit(&self, state: &StaticInfoState, v: Vertex) -> Vec<EdgeId> {
        let (visited, _) = self.bitsets(state);
        self.fresh(v, &visited)
    }
}

/// Shortest distances to `t` along edges in their travel direction.
fn distances_to(g: &StaticGraph, t: Vertex) -> Vec<Cost> {
    let n = g.vertex_count();
    let mut into: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for (id, e) in g.edges().iter().enumerate() {
        into[e.v].push(id);
        if !g.is_directed() {
            into[e.u].push(id);
        }
    }
    let mut dist = vec![Cost::UNREACHABLE; n];
    let mut heap = BinaryHeap::new();
    dist[t] = Cost::ZERO;
    heap.push(Reverse((Cost::ZERO, t)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &e in &into[x] {
            let y = g.edge(e).other(x);
            let nd = d + g.edge(e).weight;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Smallest total length Traveller can guarantee, or `UNREACHABLE`.
pub fn exact_static_value(inst: &Instance, opts: StaticOptions) -> Result<Cost> {
    StaticSolver::new(inst, opts)?.value()
}

/// Whether Traveller can guarantee reaching the target with total length at most `deadline`.
pub fn decide_static(inst: &Instance, deadline: u64, opts: StaticOptions) -> Result<bool> {
    StaticSolver::new(inst, opts)?.wins_within(deadline)
}

/// Plain shortest-path length from `s` to `t`, ignoring Blocker.
pub fn shortest_path(g: &StaticGraph, s: Vertex, t: Vertex) -> Cost {
    distances_to(g, t)[s]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parallel(k: u32) -> Instance {
        let mut b = StaticGraph::builder(false);
        b.edge("s", "t", 1, 1).edge("s", "t", 3, 1);
        Instance::from_static(b.build().unwrap(), "s", "t", k).unwrap()
    }

    #[test]
    fn parallel_edges() {
        let o = StaticOptions::default();
        assert_eq!(exact_static_value(&parallel(1), o).unwrap(), Cost::new(3));
        assert_eq!(exact_static_value(&parallel(0), o).unwrap(), Cost::new(1));
        assert!(decide_static(&parallel(1), 3, o).unwrap());
        assert!(!decide_static(&parallel(1), 2, o).unwrap());
    }

    #[test]
    fn bridge() {
        let mut b = StaticGraph::builder(false);
        b.edge("s", "t", 1, 1);
        let inst = Instance::from_static(b.build().unwrap(), "s", "t", 1).unwrap();
        assert_eq!(exact_static_value(&inst, StaticOptions::default()).unwrap(), Cost::UNREACHABLE);
    }

    #[test]
    fn two_routes() {
        let mut b = StaticGraph::builder(false);
        b.edge("s", "a", 1, 1).edge("a", "t", 1, 2).edge("s", "b", 1, 2).edge("b", "t", 1, 1);
        let inst = Instance::from_static(b.build().unwrap(), "s", "t", 1).unwrap();
        let v = exact_static_value(&inst, StaticOptions::default()).unwrap();
        assert_eq!(v, Cost::new(2));
    }

    #[test]
    fn tail_mode_requires_direction() {
        let o = StaticOptions { discovery: Discovery::Tail, ..Default::default() };
        assert!(StaticSolver::new(&parallel(1), o).is_err());
    }
}
