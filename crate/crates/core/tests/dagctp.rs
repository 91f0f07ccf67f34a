use proptest::prelude::*;
use tctp::dagctp::{brute_dag_game, compute_pi, compute_pi_in_order, topological_order, Guard};
use tctp::random::{random_dag, rng, DagParams};
use tctp::Cost;

fn dijkstra(dag: &tctp::dagctp::Dag, s: usize, t: usize) -> Cost {
    let order = topological_order(dag).unwrap();
    let mut dist = vec![Cost::UNREACHABLE; dag.node_count()];
    dist[t] = Cost::ZERO;
    for &v in order.iter().rev() {
        if v == t {
            continue;
        }
        for &a in dag.out(v) {
            let arc = dag.arc(a);
            dist[v] = dist[v].min(dist[arc.head] + arc.weight);
        }
    }
    dist[s]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn pi_matches_exhaustive_game(seed in any::<u64>(), k in 0u32..=3) {
        let (dag, s, t) = random_dag(&mut rng(seed), DagParams::default());
        let pi = compute_pi(&dag, t, k).unwrap();
        let brute = brute_dag_game(&dag, s, t, k, Guard::unlimited()).unwrap();
        prop_assert_eq!(pi.get(s, k), brute);
    }

    #[test]
    fn budget_monotone(seed in any::<u64>()) {
        let (dag, _, t) = random_dag(&mut rng(seed), DagParams::default());
        let pi = compute_pi(&dag, t, 3).unwrap();
        for v in 0..dag.node_count() {
            for i in 0..3 {
                prop_assert!(pi.get(v, i) <= pi.get(v, i + 1));
            }
        }
    }

    #[test]
    fn zero_budget_is_shortest_path(seed in any::<u64>()) {
        let (dag, s, t) = random_dag(&mut rng(seed), DagParams::default());
        prop_assert_eq!(compute_pi(&dag, t, 0).unwrap().get(s, 0), dijkstra(&dag, s, t));
    }

    #[test]
    fn order_independent(seed in any::<u64>()) {
        let (dag, _, t) = random_dag(&mut rng(seed), DagParams::default());
        // node ids already form a topological order
        let ids: Vec<usize> = (0..dag.node_count()).collect();
        let a = compute_pi(&dag, t, 2).unwrap();
        let b = compute_pi_in_order(&dag, t, 2, &ids).unwrap();
        prop_assert_eq!(a, b);
    }
}
