//! Seeded generators for small random instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::dagctp::{Dag, NodeId};
use crate::graph::{StaticGraph, TemporalGraph, Time, TimeEdge, Vertices};
use crate::instance::Instance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct DagParams {
    pub max_nodes: usize,
    pub max_arcs: usize,
    pub max_weight: u64,
    pub max_copies: u32,
}

impl Default for DagParams {
    fn default() -> Self {
        DagParams { max_nodes: 8, max_arcs: 14, max_weight: 9, max_copies: 3 }
    }
}

/// A random DAG on nodes `0..n` with arcs only from lower to higher ids;
/// the source is node 0 and the target node `n-1`.
pub fn random_dag<R: Rng>(rng: &mut R, p: DagParams) -> (Dag, NodeId, NodeId) {
    let n = rng.gen_range(2..=p.max_nodes.max(2));
    let mut dag = Dag::new();
    for i in 0..n {
        dag.add_node(format!("n{i}"));
    }
    let arcs = rng.gen_range(1..=p.max_arcs.max(1));
    for _ in 0..arcs {
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(a + 1..n);
        // copy counts skew low so that blocking matters
        let copies = if rng.gen_bool(0.6) { 1 } else { rng.gen_range(1..=p.max_copies) };
        dag.add_simple_arc(a, b, rng.gen_range(1..=p.max_weight), copies);
    }
    (dag, 0, n - 1)
}

/// The same DAG as a directed static graph.
pub fn dag_to_static(dag: &Dag) -> StaticGraph {
    let names = (0..dag.node_count()).map(|v| dag.name(v).to_string());
    let vertices = Vertices::from_names(names).expect("distinct names");
    let edges = dag.arcs().iter().map(|a| {
        crate::graph::StaticEdge::new(a.tail, a.head, a.weight, dag.group_copies(a.group))
    });
    StaticGraph::new(vertices, edges, true).expect("valid DAG")
}

#[derive(Clone, Copy, Debug)]
pub struct TemporalParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_tau: Time,
    pub max_d: Time,
    pub max_copies: u32,
    pub max_k: u32,
}

impl Default for TemporalParams {
    fn default() -> Self {
        TemporalParams { max_vertices: 6, max_edges: 12, max_tau: 5, max_d: 2, max_copies: 3, max_k: 2 }
    }
}

/// A random temporal instance with source `v0` and target `v{n-1}`.
pub fn random_temporal<R: Rng>(rng: &mut R, p: TemporalParams) -> Instance {
    let n = rng.gen_range(2..=p.max_vertices.max(2));
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let vertices = Vertices::from_names(names.iter().cloned()).expect("distinct names");
    let k = rng.gen_range(0..=p.max_k);
    let count = rng.gen_range(1..=p.max_edges.max(1));
    let mut edges = Vec::new();
    for _ in 0..count {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let tau = rng.gen_range(0..=p.max_tau);
        let d = rng.gen_range(1..=p.max_d.max(1));
        let copies = if rng.gen_bool(0.6) { 1 } else { rng.gen_range(1..=p.max_copies.max(1)) };
        edges.push(TimeEdge::new(u, v, tau, d, copies));
    }
    let g = TemporalGraph::new(vertices, edges).expect("valid edges");
    Instance::temporal(g, &names[0], &names[n - 1], k).expect("known endpoints")
}
