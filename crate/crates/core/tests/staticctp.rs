use proptest::prelude::*;
use tctp::dagctp::compute_pi;
use tctp::random::{dag_to_static, random_dag, rng, DagParams};
use tctp::staticctp::{exact_static_value, shortest_path, Discovery, StaticOptions};
use tctp::{Instance, StaticEdge, StaticGraph};

fn undirected(seed: u64, k: u32) -> Instance {
    let (dag, s, t) = random_dag(&mut rng(seed), DagParams { max_nodes: 6, max_arcs: 9, max_weight: 9, max_copies: 2 });
    let g = dag_to_static(&dag);
    let edges: Vec<StaticEdge> = g.edges().to_vec();
    let g = StaticGraph::new(g.vertices().clone(), edges, false).unwrap();
    let names = g.vertices().clone();
    Instance::from_static(g, names.name(s), names.name(t), k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn tail_discovery_matches_dag_program(seed in any::<u64>(), k in 0u32..=3) {
        let (dag, s, t) = random_dag(&mut rng(seed), DagParams::default());
        let g = dag_to_static(&dag);
        let inst = Instance::from_static(g, dag.name(s), dag.name(t), k).unwrap();
        let opts = StaticOptions { discovery: Discovery::Tail, ..Default::default() };
        let value = exact_static_value(&inst, opts).unwrap();
        prop_assert_eq!(value, compute_pi(&dag, t, k).unwrap().get(s, k));
    }

    #[test]
    fn zero_budget_is_shortest_path(seed in any::<u64>()) {
        let inst = undirected(seed, 0);
        let g = inst.static_graph().unwrap();
        let v = exact_static_value(&inst, StaticOptions::default()).unwrap();
        prop_assert_eq!(v, shortest_path(g, inst.source, inst.target));
    }

    #[test]
    fn more_copies_never_hurt(seed in any::<u64>(), k in 1u32..=2, pick in any::<prop::sample::Index>()) {
        let inst = undirected(seed, k);
        let g = inst.static_graph().unwrap();
        let mut edges = g.edges().to_vec();
        let i = pick.index(edges.len());
        edges[i].copies += 1;
        let richer = Instance { graph: tctp::Graph::Static(StaticGraph::new(g.vertices().clone(), edges, false).unwrap()), ..inst.clone() };
        let a = exact_static_value(&inst, StaticOptions::default()).unwrap();
        let b = exact_static_value(&richer, StaticOptions::default()).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn decision_agrees_with_value(seed in any::<u64>(), k in 0u32..=2, slack in 0u64..4) {
        let inst = undirected(seed, k);
        let v = exact_static_value(&inst, StaticOptions::default()).unwrap();
        if let Some(v) = v.value() {
            prop_assert!(tctp::staticctp::decide_static(&inst, v + slack, StaticOptions::default()).unwrap());
            if v > 0 {
                prop_assert!(!tctp::staticctp::decide_static(&inst, v - 1, StaticOptions::default()).unwrap());
            }
        }
    }
}

/// Independent oracle: single-edge moves, Blocker may block any number of
/// copies, values inside one knowledge state found by Bellman-Ford.
fn brute(g: &StaticGraph, t: usize, pos: usize, visited: u32, blocked: &[u32], remaining: u32) -> tctp::Cost {
    use tctp::Cost;
    if pos == t {
        return Cost::ZERO;
    }
    let n = g.vertex_count();
    let m = g.edges().len();
    let visited = visited | (1 << pos);
    let known = |e: usize, vis: u32| {
        let edge = g.edge(e);
        vis & (1 << edge.u) != 0 || vis & (1 << edge.v) != 0
    };
    // Blocker decides edges newly known at pos
    let fresh: Vec<usize> = (0..m).filter(|&e| known(e, visited) && !known(e, visited & !(1 << pos))).collect();
    let mut counts = vec![0u32; fresh.len()];
    let mut worst = Cost::ZERO;
    loop {
        let used: u32 = counts.iter().sum();
        if used <= remaining {
            let mut bl = blocked.to_vec();
            for (i, &e) in fresh.iter().enumerate() {
                bl[e] = counts[i];
            }
            let left = remaining - used;
            // exits: value of stepping onto an unvisited vertex or t
            let mut val = vec![Cost::UNREACHABLE; n];
            val[t] = Cost::ZERO;
            let mut exit = vec![Cost::UNREACHABLE; n];
            for u in 0..n {
                if visited & (1 << u) == 0 && u != t {
                    exit[u] = brute(g, t, u, visited, &bl, left);
                }
            }
            for _ in 0..n + 1 {
                for e in 0..m {
                    let edge = g.edge(e);
                    if !known(e, visited) || bl[e] >= edge.copies {
                        continue;
                    }
                    for (x, y) in [(edge.u, edge.v), (edge.v, edge.u)] {
                        if visited & (1 << x) == 0 {
                            continue;
                        }
                        let next = if visited & (1 << y) != 0 || y == t { val[y] } else { exit[y] };
                        let c = next + edge.weight;
                        if c < val[x] {
                            val[x] = c;
                        }
                    }
                }
                val[t] = Cost::ZERO;
            }
            worst = worst.max(val[pos]);
        }
        let mut i = 0;
        while i < fresh.len() {
            if counts[i] < g.edge(fresh[i]).copies {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == fresh.len() {
            break;
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn matches_single_step_oracle(seed in any::<u64>(), k in 0u32..=2) {
        let (dag, s, t) = random_dag(&mut rng(seed), DagParams { max_nodes: 5, max_arcs: 7, max_weight: 5, max_copies: 2 });
        let g = dag_to_static(&dag);
        let g = StaticGraph::new(g.vertices().clone(), g.edges().to_vec(), false).unwrap();
        let inst = Instance::from_static(g.clone(), dag.name(s), dag.name(t), k).unwrap();
        let fast = exact_static_value(&inst, StaticOptions::default()).unwrap();
        let slow = brute(&g, inst.target, inst.source, 0, &vec![0; g.edges().len()], k);
        prop_assert_eq!(fast, slow);
    }
}
