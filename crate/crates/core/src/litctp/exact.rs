use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeStatus, TemporalGraph, Time, Vertex};
use crate::instance::Instance;

/// Traveller's knowledge during a locally informed game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiInfoState {
    pub position: Vertex,
    pub clock: Time,
    pub statuses: Vec<EdgeStatus>,
    pub visited: Vec<bool>,
    pub budget_used: u32,
}

impl LiInfoState {
    /// Traveller at `s` at time `start`, before anything is revealed.
    pub fn initial(g: &TemporalGraph, s: Vertex, start: Time) -> Self {
        LiInfoState {
            position: s,
            clock: start,
            statuses: vec![EdgeStatus::Unknown; g.edges().len()],
            visited: vec![false; g.vertex_count()],
            budget_used: 0,
        }
    }

    /// Whether some copy of `e` is known to be open.
    pub fn passable(&self, g: &TemporalGraph, e: EdgeId) -> bool {
        matches!(self.statuses[e], EdgeStatus::Revealed(b) if b < g.edge(e).copies)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiOptions {
    /// Cap on memoised states; `None` removes it.
    pub max_states: Option<usize>,
}

impl Default for LiOptions {
    fn default() -> Self {
        LiOptions { max_states: Some(10_000_000) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LiOutcome {
    pub wins: bool,
    pub states: usize,
}

type Key = (Vertex, Time, u32, Vec<u8>);

/// Exact search over knowledge states. Blocker either blocks every copy of an
/// edge or none (a partial block leaves the edge usable and only wastes
/// budget), and only edges Traveller could still use are ever decided.
pub struct LiSolver<'a> {
    g: &'a TemporalGraph,
    target: Vertex,
    k: u32,
    t1: Time,
    t2: Option<Time>,
    events: Vec<Time>,
    memo: HashMap<Key, bool>,
    opts: LiOptions,
    source: Vertex,
}

impl<'a> LiSolver<'a> {
    pub fn new(inst: &'a Instance, t1: Time, t2: Option<Time>, opts: LiOptions) -> Result<Self> {
        let g = inst.temporal_graph()?;
        let mut events: Vec<Time> = g
            .edges()
            .iter()
            .filter(|e| e.tau >= t1 && t2.is_none_or(|t2| e.arrival() <= t2))
            .map(|e| e.tau)
            .collect();
        events.sort_unstable();
        events.dedup();
        Ok(LiSolver {
            g,
            target: inst.target,
            k: inst.k,
            t1,
            t2,
            events,
            memo: HashMap::new(),
            opts,
            source: inst.source,
        })
    }

    pub fn graph(&self) -> &'a TemporalGraph {
        self.g
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }

    /// Whether `e` can still be taken by someone standing at an endpoint at `clock`.
    fn relevant(&self, e: EdgeId, clock: Time) -> bool {
        let e = self.g.edge(e);
        e.tau >= clock && e.tau >= self.t1 && self.t2.is_none_or(|t2| e.arrival() <= t2)
    }

    fn key(&self, v: Vertex, clock: Time, remaining: u32, st: &[EdgeStatus]) -> Key {
        let snapped = match self.events.partition_point(|&x| x < clock) {
            i if i < self.events.len() => self.events[i],
            _ => Time::MAX,
        };
        let bits = (0..st.len())
            .map(|e| {
                if !self.relevant(e, snapped) {
                    return 0;
                }
                match st[e] {
                    EdgeStatus::Unknown => 0,
                    EdgeStatus::Revealed(b) if b >= self.g.edge(e).copies => 2,
                    EdgeStatus::Revealed(_) => 1,
                }
            })
            .collect();
        (v, snapped, remaining, bits)
    }

    fn fresh(&self, v: Vertex, clock: Time, st: &[EdgeStatus]) -> Vec<EdgeId> {
        self.g
            .incident(v)
            .iter()
            .copied()
            .filter(|&e| st[e] == EdgeStatus::Unknown && self.relevant(e, clock))
            .collect()
    }

    /// Full-block subsets of `fresh` within budget, by total copies then lexicographically.
    fn reveals(&self, fresh: &[EdgeId], remaining: u32) -> Vec<Vec<EdgeId>> {
        let mut out: Vec<(u32, Vec<EdgeId>)> = Vec::new();
        let mut stack: Vec<EdgeId> = Vec::new();
        fn rec(
            g: &TemporalGraph,
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
        out.sort();
        out.into_iter().map(|(_, s)| s).collect()
    }

    /// Traveller has just reached `v` at `clock`; Blocker reveals, then Traveller moves.
    fn arrive(&mut self, v: Vertex, clock: Time, st: &mut Vec<EdgeStatus>, remaining: u32) -> Result<bool> {
        if v == self.target {
            return Ok(true);
        }
        let key = self.key(v, clock, remaining, st);
        if let Some(&w) = self.memo.get(&key) {
            return Ok(w);
        }
        let fresh = self.fresh(v, clock, st);
        let mut result = true;
        for blocked in self.reveals(&fresh, remaining) {
            let mut cost = 0;
            for &e in &fresh {
                let c = if blocked.contains(&e) { self.g.edge(e).copies } else { 0 };
                cost += c;
                st[e] = EdgeStatus::Revealed(c);
            }
            let w = self.travel(v, clock, st, remaining - cost);
            for &e in &fresh {
                st[e] = EdgeStatus::Unknown;
            }
            if !w? {
                result = false;
                break;
            }
        }
        if let Some(limit) = self.opts.max_states {
            if self.memo.len() >= limit {
                return Err(Error::SizeLimit(format!("{limit} knowledge states")));
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }

    fn options(&self, v: Vertex, clock: Time, st: &[EdgeStatus]) -> Vec<EdgeId> {
        let mut opts: Vec<EdgeId> = self
            .g
            .incident(v)
            .iter()
            .copied()
            .filter(|&e| self.relevant(e, clock))
            .filter(|&e| matches!(st[e], EdgeStatus::Revealed(b) if b < self.g.edge(e).copies))
            .collect();
        opts.sort_by_key(|&e| (self.g.edge(e).other(v) != self.target, self.g.edge(e).arrival(), e));
        opts
    }

    fn travel(&mut self, v: Vertex, clock: Time, st: &mut Vec<EdgeStatus>, remaining: u32) -> Result<bool> {
        for e in self.options(v, clock, st) {
            let edge = *self.g.edge(e);
            if self.arrive(edge.other(v), edge.arrival(), st, remaining)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether Traveller wins from the start of the game.
    pub fn solve(&mut self) -> Result<bool> {
        let mut st = vec![EdgeStatus::Unknown; self.g.edges().len()];
        self.arrive(self.source, self.t1, &mut st, self.k)
    }

    /// Whether Traveller wins from `state`, taken just before the reveal at its position.
    pub fn wins_at_arrival(&mut self, state: &LiInfoState) -> Result<bool> {
        let remaining = self.k.saturating_sub(state.budget_used);
        let mut st = state.statuses.clone();
        if state.visited[state.position] {
            self.travel(state.position, state.clock, &mut st, remaining)
        } else {
            self.arrive(state.position, state.clock, &mut st, remaining)
        }
    }

    /// A winning move from `state` (after the reveal at its position), if one exists.
    pub fn traveller_choice(&mut self, state: &LiInfoState) -> Result<Option<EdgeId>> {
        let remaining = self.k.saturating_sub(state.budget_used);
        let mut st = state.statuses.clone();
        for e in self.options(state.position, state.clock, &st) {
            let edge = *self.g.edge(e);
            if self.arrive(edge.other(state.position), edge.arrival(), &mut st, remaining)? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    /// Edges Blocker should block on Traveller's arrival described by `state`:
    /// the first reveal that defeats Traveller, or nothing if none does.
    pub fn blocker_choice(&mut self, state: &LiInfoState) -> Result<Vec<EdgeId>> {
        let remaining = self.k.saturating_sub(state.budget_used);
        let v = state.position;
        let mut st = state.statuses.clone();
        let fresh = self.fresh(v, state.clock, &st);
        for blocked in self.reveals(&fresh, remaining) {
            let mut cost = 0;
            for &e in &fresh {
                let c = if blocked.contains(&e) { self.g.edge(e).copies } else { 0 };
                cost += c;
                st[e] = EdgeStatus::Revealed(c);
            }
            let w = self.travel(v, state.clock, &mut st, remaining - cost)?;
            for &e in &fresh {
                st[e] = EdgeStatus::Unknown;
            }
            if !w {
                return Ok(blocked);
            }
        }
        Ok(Vec::new())
    }
}

/// Decides the locally informed game for Traveller leaving `s` at `t1` with deadline `t2`.
pub fn exact_li(inst: &Instance, t1: Time, t2: Option<Time>, opts: LiOptions) -> Result<LiOutcome> {
    let mut solver = LiSolver::new(inst, t1, t2, opts)?;
    let wins = solver.solve()?;
    Ok(LiOutcome { wins, states: solver.states() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_routes(k: u32) -> Instance {
        let mut b = TemporalGraph::builder();
        b.edge("s", "v0", 0, 1, 3)
            .edge("v0", "v1", 1, 1, 3)
            .edge("v0", "v2", 2, 1, 1)
            .edge("v1", "t", 2, 1, 2)
            .edge("v2", "t", 3, 1, 3);
        Instance::temporal(b.build().unwrap(), "s", "t", k).unwrap()
    }

    #[test]
    fn two_routes_won_informed() {
        let inst = two_routes(2);
        assert!(exact_li(&inst, 0, None, LiOptions::default()).unwrap().wins);
        assert!(exact_li(&inst, 0, Some(4), LiOptions::default()).unwrap().wins);
        assert!(!exact_li(&inst, 0, Some(3), LiOptions::default()).unwrap().wins);
    }

    #[test]
    fn zero_budget_is_reachability() {
        let mut b = TemporalGraph::builder();
        b.edge("s", "a", 2, 1, 1).edge("a", "t", 1, 1, 1);
        let inst = Instance::temporal(b.build().unwrap(), "s", "t", 0).unwrap();
        assert!(!exact_li(&inst, 0, None, LiOptions::default()).unwrap().wins);
        let mut b = TemporalGraph::builder();
        b.edge("s", "a", 0, 1, 1).edge("a", "t", 1, 1, 1);
        let inst = Instance::temporal(b.build().unwrap(), "s", "t", 0).unwrap();
        assert!(exact_li(&inst, 0, None, LiOptions::default()).unwrap().wins);
    }

    #[test]
    fn strategy_follows_the_cheap_edge_when_open() {
        let inst = two_routes(2);
        let g = inst.temporal_graph().unwrap();
        let mut solver = LiSolver::new(&inst, 0, None, LiOptions::default()).unwrap();
        assert!(solver.solve().unwrap());
        let v0 = g.vertices().id("v0").unwrap();
        let v2 = g.vertices().id("v2").unwrap();
        let mut state = LiInfoState::initial(g, v0, 1);
        state.visited[inst.source] = true;
        state.visited[v0] = true;
        for &e in g.incident(v0) {
            state.statuses[e] = EdgeStatus::Revealed(0);
        }
        let mv = solver.traveller_choice(&state).unwrap().unwrap();
        // both routes win here; the choice must be one of them
        assert!(g.edge(mv).touches(v2) || g.edge(mv).tau == 1);
    }

    #[test]
    fn tiny_limit_trips() {
        let inst = two_routes(2);
        let err = exact_li(&inst, 0, None, LiOptions { max_states: Some(1) }).unwrap_err();
        assert!(matches!(err, Error::SizeLimit(_)));
    }
}
