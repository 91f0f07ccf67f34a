use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, TemporalGraph, Time, Vertex};
use crate::instance::Instance;

/// A latest-departure value. Ordered `Never < At(_) < Unbounded`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "time", rename_all = "snake_case")]
pub enum LatestTime {
    Never,
    At(Time),
    Unbounded,
}

impl LatestTime {
    fn allows(self, arrival: Time) -> bool {
        self >= LatestTime::At(arrival)
    }
}

fn deadline_time(deadline: Option<Time>) -> LatestTime {
    deadline.map_or(LatestTime::Unbounded, LatestTime::At)
}

/// Latest time Traveller may stand at each vertex and still reach `t` by the
/// deadline, with no adversary. Only edges departing at or after `from` are
/// used; `removed` takes one copy of that edge away.
fn latest_from(
    g: &TemporalGraph,
    t: Vertex,
    deadline: Option<Time>,
    from: Time,
    removed: Option<EdgeId>,
) -> Vec<LatestTime> {
    let mut latest = vec![LatestTime::Never; g.vertex_count()];
    latest[t] = deadline_time(deadline);
    let mut ids: Vec<EdgeId> = (0..g.edges().len())
        .filter(|&id| g.edge(id).tau >= from)
        .filter(|&id| Some(id) != removed || g.edge(id).copies > 1)
        .collect();
    // an edge only depends on edges departing strictly later, since d >= 1
    ids.sort_by_key(|&id| std::cmp::Reverse(g.edge(id).tau));
    for id in ids {
        let e = g.edge(id);
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if x != t && latest[y].allows(e.arrival()) {
                latest[x] = latest[x].max(LatestTime::At(e.tau));
            }
        }
    }
    latest
}

/// Plain latest departures towards `t`, optionally with one copy of an edge removed.
pub fn latest_departures(
    g: &TemporalGraph,
    t: Vertex,
    deadline: Option<Time>,
    removed: Option<EdgeId>,
) -> Vec<LatestTime> {
    latest_from(g, t, deadline, 0, removed)
}

/// Latest time Traveller can leave `v` and still reach `t` by the deadline when
/// one copy of edge `e` is blocked and nothing else is.
pub fn compute_mu(g: &TemporalGraph, t: Vertex, deadline: Option<Time>, v: Vertex, e: EdgeId) -> Result<LatestTime> {
    if e >= g.edges().len() || !g.edge(e).touches(v) {
        return Err(Error::InvalidArgument(format!("edge {e} is not incident to vertex {v}")));
    }
    Ok(latest_departures(g, t, deadline, Some(e))[v])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi1Table {
    pub pi1: Vec<LatestTime>,
    pub nu1: Vec<LatestTime>,
    pub lambda1: Vec<LatestTime>,
    /// `μ(v, e)` for each vertex and each incident edge considered.
    pub mu: Vec<Vec<(EdgeId, LatestTime)>>,
    /// Vertices in the order they joined the settled set, starting with the target.
    pub order: Vec<Vertex>,
}

/// The single-block algorithm: Traveller standing at `s` at time `start` wins
/// against one block iff `π1(s) >= start`.
pub fn solve_k1(inst: &Instance, start: Time, deadline: Option<Time>) -> Result<(Pi1Table, bool)> {
    if inst.k != 1 {
        return Err(Error::InvalidArgument(format!("the single-block algorithm needs k = 1, got {}", inst.k)));
    }
    let g = inst.temporal_graph()?;
    let (s, t) = (inst.source, inst.target);
    let n = g.vertex_count();
    let usable = |id: EdgeId| g.edge(id).tau >= start;

    let mut mu = vec![Vec::new(); n];
    let mut lambda1 = vec![LatestTime::Unbounded; n];
    for v in (0..n).filter(|&v| v != t) {
        for &id in g.incident(v).iter().filter(|&&id| usable(id)) {
            let m = latest_from(g, t, deadline, start, Some(id))[v];
            mu[v].push((id, m));
            lambda1[v] = lambda1[v].min(m);
        }
    }

    let mut pi1 = vec![LatestTime::Never; n];
    let mut nu1 = vec![LatestTime::Never; n];
    let mut settled = vec![false; n];
    pi1[t] = deadline_time(deadline);
    nu1[t] = pi1[t];
    settled[t] = true;
    let mut order = vec![t];

    let relax = |v_star: Vertex, pi1: &mut [LatestTime], nu1: &mut [LatestTime], settled: &[bool]| {
        for &id in g.incident(v_star).iter().filter(|&&id| usable(id)) {
            let e = g.edge(id);
            let v = e.other(v_star);
            if !settled[v] && pi1[v_star].allows(e.arrival()) {
                nu1[v] = nu1[v].max(LatestTime::At(e.tau));
            }
        }
        for v in (0..n).filter(|&v| !settled[v]) {
            pi1[v] = lambda1[v].min(nu1[v]);
        }
    };
    relax(t, &mut pi1, &mut nu1, &settled);

    while !settled[s] {
        let v_star = (0..n)
            .filter(|&v| !settled[v])
            .max_by(|&a, &b| pi1[a].cmp(&pi1[b]).then(b.cmp(&a)))
            .expect("source is unsettled");
        settled[v_star] = true;
        order.push(v_star);
        relax(v_star, &mut pi1, &mut nu1, &settled);
    }

    let wins = pi1[s] >= LatestTime::At(start);
    Ok((Pi1Table { pi1, nu1, lambda1, mu, order }, wins))
}
