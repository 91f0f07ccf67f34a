use super::*;
use crate::graph::StaticGraph;
use crate::litctp::LiOptions;

fn two_routes() -> Instance {
    let mut b = TemporalGraph::builder();
    b.edge("s", "v0", 0, 1, 3)
        .edge("v0", "v1", 1, 1, 3)
        .edge("v0", "v2", 2, 1, 1)
        .edge("v1", "t", 2, 1, 2)
        .edge("v2", "t", 3, 1, 3);
    Instance::temporal(b.build().unwrap(), "s", "t", 2).unwrap()
}

fn fan() -> Instance {
    let mut b = StaticGraph::builder(true);
    b.edge("s", "t", 1, 1).edge("s", "t", 2, 1).edge("s", "t", 5, 1);
    Instance::from_static(b.build().unwrap(), "s", "t", 2).unwrap()
}

fn edge(inst: &Instance, u: &str, v: &str, tau: Time) -> EdgeId {
    let g = inst.temporal_graph().unwrap();
    let id = |n: &str| g.vertices().id(n).unwrap();
    g.find_edge(id(u), id(v), tau, 1).unwrap()
}

/// Wait at v0 for the single edge to v2 if it survives, otherwise go through v1.
fn two_route_traveller(inst: &Instance) -> impl TravellerPolicy + '_ {
    let (sv0, v0v1, v0v2) = (edge(inst, "s", "v0", 0), edge(inst, "v0", "v1", 1), edge(inst, "v0", "v2", 2));
    let (v1t, v2t) = (edge(inst, "v1", "t", 2), edge(inst, "v2", "t", 3));
    PolicyFn(move |view: &View| {
        Ok(match view.inst.vertex_name(view.position) {
            "s" => Action::Move(sv0),
            "v0" if matches!(view.statuses[v0v2], EdgeStatus::Revealed(0)) => Action::Move(v0v2),
            "v0" => Action::Move(v0v1),
            "v1" => Action::Move(v1t),
            "v2" => Action::Move(v2t),
            _ => Action::Resign,
        })
    })
}

#[test]
fn two_routes_locally_informed_win() {
    let inst = two_routes();
    let v0v2 = edge(&inst, "v0", "v2", 2);
    let game = Game::new(Model::Li);
    let mut block_v0v2 = PolicyFn(move |_: &View, fresh: &[EdgeId]| {
        Ok(if fresh.contains(&v0v2) { vec![(v0v2, 1)] } else { vec![] })
    });
    let t = play(&inst, &mut two_route_traveller(&inst), &mut block_v0v2, game).unwrap();
    assert_eq!(t.outcome, Outcome::TravellerWin);
    assert_eq!(t.final_time, 3);
    let t = play(&inst, &mut two_route_traveller(&inst), &mut NoBlock, game).unwrap();
    assert_eq!(t.outcome, Outcome::TravellerWin);
    assert_eq!(t.final_time, 4);

    let by_four = Game::new(Model::Li).window(0, Some(4));
    let v = verify_traveller_strategy(&inst, &mut two_route_traveller(&inst), by_four, VerifyLimits::default()).unwrap();
    assert!(v.holds);
    let mut optimal = LiTraveller::new(&inst, by_four, LiOptions::default()).unwrap();
    assert!(verify_traveller_strategy(&inst, &mut optimal, by_four, VerifyLimits::default()).unwrap().holds);
}

#[test]
fn two_routes_uninformed_loss() {
    let inst = two_routes();
    let game = Game::new(Model::U);
    let (v0v2, v1t) = (edge(&inst, "v0", "v2", 2), edge(&inst, "v1", "t", 2));
    let mut line = PolicyFn(move |_: &View, fresh: &[EdgeId]| {
        Ok(fresh.iter().filter(|&&e| e == v0v2 || e == v1t).map(|&e| (e, if e == v1t { 2 } else { 1 })).collect())
    });
    let t = play(&inst, &mut Greedy, &mut line, game).unwrap();
    assert_eq!(t.outcome, Outcome::BlockerWin);
    let mut optimal = UBlocker::new(&inst, game).unwrap();
    assert_eq!(play(&inst, &mut Greedy, &mut optimal, game).unwrap().outcome, Outcome::BlockerWin);
    let v = verify_traveller_strategy(&inst, &mut Greedy, game, VerifyLimits::default()).unwrap();
    assert!(!v.holds);
    assert_eq!(v.counterexample.unwrap().outcome, Outcome::BlockerWin);
}

#[test]
fn zero_budget_is_reachability() {
    let mut inst = two_routes();
    inst.k = 0;
    for model in [Model::Li, Model::U] {
        let t = play(&inst, &mut Greedy, &mut BlockAll, Game::new(model)).unwrap();
        assert_eq!(t.outcome, Outcome::TravellerWin);
        assert_eq!(t.budget_spent, 0);
        assert_eq!(t.final_time, 3);
    }
}

#[test]
fn fan_verification() {
    let inst = fan();
    let mut policy = DagTraveller::new(&inst).unwrap();
    let five = Game::new(Model::Static).window(0, Some(5));
    assert!(verify_traveller_strategy(&inst, &mut policy, five, VerifyLimits::default()).unwrap().holds);
    let four = Game::new(Model::Static).window(0, Some(4));
    let v = verify_traveller_strategy(&inst, &mut policy, four, VerifyLimits::default()).unwrap();
    assert!(!v.holds);
    let cex = v.counterexample.unwrap();
    let Event::Reveal { edges, .. } = &cex.events[0] else { panic!("first event is the reveal at s") };
    let blocked: Vec<&str> = edges.iter().filter(|r| r.blocked > 0).map(|r| r.label.as_str()).collect();
    assert_eq!(blocked, vec!["s->t:1", "s->t:2"]);
    assert_eq!(cex.final_time, 5);
}

#[test]
fn source_on_target() {
    let mut b = StaticGraph::builder(false);
    b.edge("s", "a", 1, 1);
    let inst = Instance::from_static(b.build().unwrap(), "s", "s", 1).unwrap();
    let mut resign = PolicyFn(|_: &View| Ok(Action::Resign));
    let v = verify_traveller_strategy(&inst, &mut resign, Game::new(Model::Static), VerifyLimits::default()).unwrap();
    assert!(v.holds);
}

#[test]
fn fouls_end_the_game() {
    let inst = two_routes();
    let sv0 = edge(&inst, "s", "v0", 0);
    let mut overspend = PolicyFn(move |_: &View, _: &[EdgeId]| Ok(vec![(sv0, 3)]));
    let t = play(&inst, &mut Greedy, &mut overspend, Game::new(Model::Li)).unwrap();
    assert_eq!((t.outcome, t.reason), (Outcome::TravellerWin, EndReason::Foul));
    let v2t = edge(&inst, "v2", "t", 3);
    let mut jump = PolicyFn(move |_: &View| Ok(Action::Move(v2t)));
    let t = play(&inst, &mut jump, &mut NoBlock, Game::new(Model::Li)).unwrap();
    assert_eq!((t.outcome, t.reason), (Outcome::BlockerWin, EndReason::Foul));
    assert!(matches!(t.events.last(), Some(Event::Foul { player: Player::Traveller, .. })));
}

#[test]
fn transcripts_replay_exactly() {
    let inst = two_routes();
    for model in [Model::Li, Model::U] {
        for seed in 0..8 {
            let game = Game::new(model);
            let t = play(&inst, &mut Greedy, &mut RandomBlocker::new(seed), game).unwrap();
            let text = t.to_json_lines();
            let back = Transcript::from_json_lines(&text).unwrap();
            assert_eq!(back, t);
            let again = play(&inst, &mut Greedy, &mut ReplayBlocker::new(&t), game).unwrap();
            assert_eq!(again, t);
            let scripted = play(&inst, &mut ReplayTraveller::new(&t), &mut ReplayBlocker::new(&t), game).unwrap();
            assert_eq!(scripted, t);
        }
    }
}

#[test]
fn builtins_by_name() {
    let inst = two_routes();
    let game = Game::new(Model::Li);
    let mut tr = builtin_traveller("optimal", &inst, game, None).unwrap();
    let mut bl = builtin_blocker("optimal", &inst, game, 7, None).unwrap();
    assert!(play(&inst, tr.as_mut(), bl.as_mut(), game).unwrap().traveller_won());
    assert!(builtin_traveller("dag", &inst, game, None).is_err());
    assert!(play(&inst, &mut Greedy, &mut NoBlock, Game::new(Model::Static)).is_err());
}
