use rand::Rng;

use tctp::arena::{
    play, verify_traveller_strategy, Game, Greedy, LiTraveller, Model, RandomBlocker, ReplayBlocker, StaticTraveller,
    Transcript, VerifyLimits,
};
use tctp::litctp::{exact_li, LiOptions};
use tctp::random::{random_temporal, rng, TemporalParams};
use tctp::staticctp::{exact_static_value, StaticOptions};
use tctp::{Instance, StaticGraph};

fn random_static(seed: u64) -> Instance {
    let mut r = rng(seed);
    let n = r.gen_range(2..=5);
    let mut b = StaticGraph::builder(false);
    for i in 0..n {
        b.vertex(&format!("v{i}"));
    }
    for _ in 0..r.gen_range(1..=7) {
        let u = r.gen_range(0..n);
        let v = (u + r.gen_range(1..n)) % n;
        b.edge(&format!("v{u}"), &format!("v{v}"), r.gen_range(1..=5), r.gen_range(1..=2));
    }
    Instance::from_static(b.build().unwrap(), "v0", &format!("v{}", n - 1), r.gen_range(0..=2)).unwrap()
}

#[test]
fn static_solver_strategy_is_verified() {
    for seed in 0..150 {
        let inst = random_static(seed);
        let value = exact_static_value(&inst, StaticOptions::default()).unwrap();
        let mut policy = StaticTraveller::new(&inst, None).unwrap();
        match value.value() {
            Some(v) => {
                let game = Game::new(Model::Static).window(0, Some(v));
                let ok = verify_traveller_strategy(&inst, &mut policy, game, VerifyLimits::default()).unwrap();
                assert!(ok.holds, "seed {seed}: value {v} not achieved");
                if v > 0 {
                    let tighter = Game::new(Model::Static).window(0, Some(v - 1));
                    let greedy = verify_traveller_strategy(&inst, &mut Greedy, tighter, VerifyLimits::default()).unwrap();
                    assert!(!greedy.holds, "seed {seed}: greedy beats the game value");
                }
            }
            None => {
                let lost = verify_traveller_strategy(&inst, &mut Greedy, Game::new(Model::Static), VerifyLimits::default())
                    .unwrap();
                assert!(!lost.holds, "seed {seed}");
            }
        }
    }
}

#[test]
fn locally_informed_strategy_meets_deadlines() {
    let mut r = rng(11);
    for case in 0..120 {
        let inst = random_temporal(&mut r, TemporalParams::default());
        let deadline = Some(inst.temporal_graph().unwrap().horizon().saturating_sub(1));
        let game = Game::new(Model::Li).window(0, deadline);
        let wins = exact_li(&inst, 0, deadline, LiOptions::default()).unwrap().wins;
        let v = if wins {
            let mut policy = LiTraveller::new(&inst, game, LiOptions::default()).unwrap();
            verify_traveller_strategy(&inst, &mut policy, game, VerifyLimits::default()).unwrap()
        } else {
            verify_traveller_strategy(&inst, &mut Greedy, game, VerifyLimits::default()).unwrap()
        };
        assert_eq!(v.holds, wins, "case {case}");
        if let Some(cex) = v.counterexample {
            assert!(!cex.traveller_won());
        }
    }
}

#[test]
fn random_games_replay_and_round_trip() {
    let mut r = rng(12);
    for case in 0..100 {
        let inst = random_temporal(&mut r, TemporalParams::default());
        for model in [Model::Li, Model::U] {
            let game = Game::new(model);
            let t = play(&inst, &mut Greedy, &mut RandomBlocker::new(case), game).unwrap();
            assert!(t.budget_spent <= inst.k);
            assert_eq!(Transcript::from_json_lines(&t.to_json_lines()).unwrap(), t);
            let again = play(&inst, &mut Greedy, &mut ReplayBlocker::new(&t), game).unwrap();
            assert_eq!(again, t, "case {case} {model}");
        }
    }
}
