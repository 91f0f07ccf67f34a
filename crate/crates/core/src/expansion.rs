//! Static expansion of a temporal graph into a DAG over `(vertex, time)` nodes.

use std::collections::{BTreeSet, HashMap};

use crate::dagctp::{ArcId, Dag, GroupId, NodeId};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, TemporalGraph, Time, Vertex};
use crate::walk::{TemporalWalk, WalkStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    At { vertex: Vertex, time: Time },
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcOrigin {
    /// Crossing time edge `edge`; `forward` when leaving from its `u` endpoint.
    Edge { edge: EdgeId, forward: bool },
    Wait,
    Sink,
}

#[derive(Clone, Debug)]
pub struct ExpandedDag {
    pub dag: Dag,
    pub labels: Vec<NodeLabel>,
    pub origins: Vec<ArcOrigin>,
    /// The time edge behind each group, `None` for wait and sink groups.
    pub group_edge: Vec<Option<EdgeId>>,
    pub source: NodeId,
    pub target: NodeId,
    pub k: u32,
    pub window: (Time, Option<Time>),
    lookup: HashMap<(Vertex, Time), NodeId>,
}

impl ExpandedDag {
    pub fn node(&self, v: Vertex, time: Time) -> Option<NodeId> {
        self.lookup.get(&(v, time)).copied()
    }

    /// The group of time edge `e`, if it survived the window.
    pub fn edge_group(&self, e: EdgeId) -> Option<GroupId> {
        self.group_edge.iter().position(|&x| x == Some(e))
    }

    /// Number of `(vertex, time)` nodes, i.e. all nodes but the target.
    pub fn timed_node_count(&self) -> usize {
        self.labels.len() - 1
    }
}

/// Builds the expansion for window `[t1, t2]` (`t2 = None` means unbounded).
///
/// Every edge `(u, v, tau, d)` inside the window creates nodes `(u, tau)`,
/// `(v, tau)`, `(u, tau + d)`, `(v, tau + d)` and the arcs `(u, tau) -> (v, tau + d)`
/// and `(v, tau) -> (u, tau + d)`, which share one group carrying the edge's copies.
/// Wait arcs link consecutive nodes of a vertex; each `(t, time)` node gets a
/// weight-0 arc into the target. Wait and sink groups have `k + 1` copies.
pub fn build_expansion(
    g: &TemporalGraph,
    s: Vertex,
    t: Vertex,
    k: u32,
    t1: Time,
    t2: Option<Time>,
) -> Result<ExpandedDag> {
    if s >= g.vertex_count() {
        return Err(Error::UnknownSource(s.to_string()));
    }
    if t >= g.vertex_count() {
        return Err(Error::UnknownTarget(t.to_string()));
    }
    if t2.is_some_and(|t2| t2 < t1) {
        return Err(Error::InvalidArgument(format!("empty window [{t1}, {}]", t2.unwrap())));
    }
    let inside: Vec<EdgeId> = (0..g.edges().len())
        .filter(|&id| {
            let e = g.edge(id);
            e.tau >= t1 && t2.is_none_or(|t2| e.arrival() <= t2)
        })
        .collect();

    let mut keys: BTreeSet<(Time, Vertex)> = BTreeSet::new();
    keys.insert((t1, s));
    for &id in &inside {
        let e = g.edge(id);
        for x in [e.u, e.v] {
            keys.insert((e.tau, x));
            keys.insert((e.arrival(), x));
        }
    }

    let mut dag = Dag::new();
    let mut labels = Vec::with_capacity(keys.len() + 1);
    let mut lookup = HashMap::with_capacity(keys.len());
    for &(time, vertex) in &keys {
        let id = dag.add_node(format!("{}@{}", g.vertices().name(vertex), time));
        labels.push(NodeLabel::At { vertex, time });
        lookup.insert((vertex, time), id);
    }
    let target = dag.add_node("target");
    labels.push(NodeLabel::Target);

    let mut origins = Vec::new();
    let mut group_edge = Vec::new();
    for &id in &inside {
        let e = g.edge(id);
        let group = dag.add_group(e.copies);
        group_edge.push(Some(id));
        for (from, to, forward) in [(e.u, e.v, true), (e.v, e.u, false)] {
            let tail = lookup[&(from, e.tau)];
            let head = lookup[&(to, e.arrival())];
            dag.add_arc(tail, head, e.d, group);
            origins.push(ArcOrigin::Edge { edge: id, forward });
        }
    }

    let mut by_vertex: Vec<Vec<Time>> = vec![Vec::new(); g.vertex_count()];
    for &(time, vertex) in &keys {
        by_vertex[vertex].push(time);
    }
    for (vertex, times) in by_vertex.iter().enumerate() {
        for pair in times.windows(2) {
            let group = dag.add_group(k + 1);
            group_edge.push(None);
            dag.add_arc(lookup[&(vertex, pair[0])], lookup[&(vertex, pair[1])], pair[1] - pair[0], group);
            origins.push(ArcOrigin::Wait);
        }
    }
    for &time in &by_vertex[t] {
        let group = dag.add_group(k + 1);
        group_edge.push(None);
        dag.add_arc(lookup[&(t, time)], target, 0, group);
        origins.push(ArcOrigin::Sink);
    }

    Ok(ExpandedDag {
        dag,
        labels,
        origins,
        group_edge,
        source: lookup[&(s, t1)],
        target,
        k,
        window: (t1, t2),
        lookup,
    })
}

/// Converts a source-to-target arc path into the temporal walk it encodes.
pub fn project_walk(x: &ExpandedDag, g: &TemporalGraph, path: &[ArcId]) -> Result<TemporalWalk> {
    let start = match x.labels[x.source] {
        NodeLabel::At { vertex, .. } => vertex,
        NodeLabel::Target => unreachable!("source is a timed node"),
    };
    let mut walk = TemporalWalk::at(start);
    let mut at = x.source;
    for (i, &a) in path.iter().enumerate() {
        if a >= x.dag.arcs().len() || x.dag.arc(a).tail != at {
            return Err(Error::InvalidArgument(format!("arc {i} of the path does not continue it")));
        }
        if let ArcOrigin::Edge { edge, forward } = x.origins[a] {
            let e = g.edge(edge);
            let (from, to) = if forward { (e.u, e.v) } else { (e.v, e.u) };
            walk.steps.push(WalkStep { from, to, tau: e.tau, d: e.d });
        }
        at = x.dag.arc(a).head;
    }
    Ok(walk)
}
