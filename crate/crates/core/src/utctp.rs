//! The uninformed temporal game, where an edge's status is revealed only when
//! Traveller stands at one of its endpoints at its departure time.
//!
//! The game is solved on the static expansion, where departure-time discovery
//! is exactly tail-side discovery.

use std::collections::HashMap;

use serde::Serialize;

use crate::dagctp::{compute_pi, PiTable};
use crate::error::{Error, Result};
use crate::expansion::{build_expansion, ExpandedDag};
use crate::graph::{Time, Vertex};
use crate::instance::Instance;

/// The solved expansion of one window; enough to replay Traveller's optimal moves.
#[derive(Clone, Debug)]
pub struct UStrategy {
    pub expansion: ExpandedDag,
    pub pi: PiTable,
}

#[derive(Clone, Debug)]
pub struct UDecision {
    pub wins: bool,
    /// Latest arrival Traveller can guarantee, if any.
    pub worst_arrival: Option<Time>,
    pub strategy: UStrategy,
}

pub fn decide_u(inst: &Instance, t1: Time, t2: Option<Time>) -> Result<UDecision> {
    let g = inst.temporal_graph()?;
    let expansion = build_expansion(g, inst.source, inst.target, inst.k, t1, t2)?;
    let pi = compute_pi(&expansion.dag, expansion.target, inst.k)?;
    let value = pi.get(expansion.source, inst.k);
    let worst_arrival = value.value().map(|v| t1 + v);
    let wins = match (worst_arrival, t2) {
        (Some(a), Some(t2)) => a <= t2,
        (Some(_), None) => true,
        (None, _) => false,
    };
    Ok(UDecision { wins, worst_arrival, strategy: UStrategy { expansion, pi } })
}

fn wins(inst: &Instance, t1: Time, t2: Option<Time>) -> Result<bool> {
    Ok(decide_u(inst, t1, t2)?.wins)
}

/// Smallest index in `0..len` where the monotone predicate turns true.
fn first_true(len: usize, mut pred: impl FnMut(usize) -> Result<bool>) -> Result<Option<usize>> {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((lo < len).then_some(lo))
}

fn arrival_events(inst: &Instance, from: Time) -> Result<Vec<Time>> {
    let g = inst.temporal_graph()?;
    let mut ts: Vec<Time> = g.edges().iter().filter(|e| e.tau >= from).map(|e| e.arrival()).collect();
    ts.sort_unstable();
    ts.dedup();
    Ok(ts)
}

fn departure_events(inst: &Instance) -> Result<Vec<Time>> {
    let g = inst.temporal_graph()?;
    let mut ts: Vec<Time> = g.edges().iter().map(|e| e.tau).collect();
    ts.sort_unstable();
    ts.dedup();
    Ok(ts)
}

/// Smallest `T2` admitting a `(0, T2)`-winning strategy.
pub fn earliest_arrival(inst: &Instance) -> Result<Option<Time>> {
    earliest_from(inst, 0)
}

fn earliest_from(inst: &Instance, t1: Time) -> Result<Option<Time>> {
    if inst.source == inst.target {
        return Ok(Some(t1));
    }
    let events = arrival_events(inst, t1)?;
    let idx = first_true(events.len(), |i| wins(inst, t1, Some(events[i])))?;
    Ok(idx.map(|i| events[i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "time", rename_all = "snake_case")]
pub enum Departure {
    Unreachable,
    At(Time),
    /// Traveller already stands on the target, so any start works.
    Unbounded,
}

/// Largest `T1` admitting a `(T1, ∞)`-winning strategy.
pub fn latest_departure(inst: &Instance) -> Result<Departure> {
    if inst.source == inst.target {
        return Ok(Departure::Unbounded);
    }
    let events = departure_events(inst)?;
    // winning is antitone in T1, so search for the first losing start
    let first_loss = first_true(events.len(), |i| Ok(!wins(inst, events[i], None)?))?;
    Ok(match first_loss {
        Some(0) => Departure::Unreachable,
        Some(i) => Departure::At(events[i - 1]),
        None if events.is_empty() => Departure::Unreachable,
        None => Departure::At(events[events.len() - 1]),
    })
}

/// Window `(T1, T2)` of minimum length admitting a winning strategy; ties go to the smaller `T1`.
pub fn shortest_duration(inst: &Instance) -> Result<Option<(Time, Time)>> {
    if inst.source == inst.target {
        return Ok(Some((0, 0)));
    }
    let mut best: Option<(Time, Time)> = None;
    for t1 in departure_events(inst)? {
        if let Some(t2) = earliest_from(inst, t1)? {
            if best.is_none_or(|(a, b)| t2 - t1 < b - a) {
                best = Some((t1, t2));
            }
        }
    }
    Ok(best)
}

/// Bounds for [`brute_u_game`]; `force` skips them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteLimits {
    pub max_vertices: usize,
    pub max_lifespan: Time,
    pub max_k: u32,
    pub force: bool,
}

impl Default for BruteLimits {
    fn default() -> Self {
        BruteLimits { max_vertices: 6, max_lifespan: 6, max_k: 2, force: false }
    }
}

struct UBrute<'a> {
    inst: &'a Instance,
    t1: Time,
    t2: Option<Time>,
    memo: HashMap<(Vertex, Time, u32), bool>,
}

impl UBrute<'_> {
    fn in_window(&self, tau: Time, arrival: Time) -> bool {
        tau >= self.t1 && self.t2.is_none_or(|t2| arrival <= t2)
    }

    fn wins(&mut self, v: Vertex, now: Time, remaining: u32) -> bool {
        if v == self.inst.target {
            return true;
        }
        if let Some(&w) = self.memo.get(&(v, now, remaining)) {
            return w;
        }
        let g = self.inst.temporal_graph().expect("temporal");
        let mut departing = Vec::new();
        let mut next: Option<Time> = None;
        for &id in g.incident(v) {
            let e = g.edge(id);
            if !self.in_window(e.tau, e.arrival()) {
                continue;
            }
            if e.tau == now {
                departing.push(id);
            } else if e.tau > now {
                next = Some(next.map_or(e.tau, |n: Time| n.min(e.tau)));
            }
        }
        let mut counts = vec![0u32; departing.len()];
        let mut result = true;
        'blocker: loop {
            let used: u32 = counts.iter().sum();
            if used <= remaining {
                let left = remaining - used;
                let mut ok = next.is_some_and(|n| self.wins(v, n, left));
                for (i, &id) in departing.iter().enumerate() {
                    if ok {
                        break;
                    }
                    let e = *g.edge(id);
                    if counts[i] < e.copies {
                        ok = self.wins(e.other(v), e.arrival(), left);
                    }
                }
                if !ok {
                    result = false;
                    break 'blocker;
                }
            }
            let mut i = 0;
            while i < departing.len() {
                if counts[i] < g.edge(departing[i]).copies {
                    counts[i] += 1;
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == departing.len() {
                break;
            }
        }
        self.memo.insert((v, now, remaining), result);
        result
    }
}

/// Exhaustive play of the uninformed game starting at `(s, t1)`.
pub fn brute_u_game(inst: &Instance, t1: Time, t2: Option<Time>, limits: BruteLimits) -> Result<bool> {
    let g = inst.temporal_graph()?;
    if !limits.force
        && (g.vertex_count() > limits.max_vertices
            || g.lifespan() > limits.max_lifespan
            || inst.k > limits.max_k)
    {
        return Err(Error::SizeLimit(format!(
            "{} vertices, lifespan {}, k {}",
            g.vertex_count(),
            g.lifespan(),
            inst.k
        )));
    }
    let mut b = UBrute { inst, t1, t2, memo: HashMap::new() };
    Ok(b.wins(inst.source, t1, inst.k))
}
