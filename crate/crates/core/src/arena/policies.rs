use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Action, BlockerPolicy, Event, Game, Model, Transcript, TravellerPolicy, View};
use crate::cost::Cost;
use crate::dagctp::{blocker_move, compute_pi, traveller_move, Dag, PiTable};
use crate::error::{Error, Result};
use crate::expansion::{ArcOrigin, NodeLabel};
use crate::graph::{EdgeId, EdgeStatus, Time};
use crate::instance::Instance;
use crate::litctp::{LiInfoState, LiOptions, LiSolver};
use crate::staticctp::{Discovery, StaticInfoState, StaticOptions, StaticSolver};
use crate::utctp::{decide_u, UStrategy};

/// Wraps a closure as a policy.
pub struct PolicyFn<F>(pub F);

impl<F: FnMut(&View) -> Result<Action>> TravellerPolicy for PolicyFn<F> {
    fn act(&mut self, view: &View) -> Result<Action> {
        (self.0)(view)
    }
}

impl<F: FnMut(&View, &[EdgeId]) -> Result<Vec<(EdgeId, u32)>>> BlockerPolicy for PolicyFn<F> {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        (self.0)(view, fresh)
    }
}

fn blocked_count(status: EdgeStatus) -> u32 {
    match status {
        EdgeStatus::Revealed(b) => b,
        EdgeStatus::Unknown => 0,
    }
}

pub struct NoBlock;

impl BlockerPolicy for NoBlock {
    fn reveal(&mut self, _: &View, _: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        Ok(Vec::new())
    }
}

/// Blocks every revealed copy while the budget lasts, in reveal order.
pub struct BlockAll;

fn edge_copies(inst: &Instance, e: EdgeId) -> u32 {
    match inst.temporal_graph() {
        Ok(g) => g.edge(e).copies,
        Err(_) => inst.static_graph().map(|g| g.edge(e).copies).unwrap_or(0),
    }
}

impl BlockerPolicy for BlockAll {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        let mut left = view.remaining();
        let mut out = Vec::new();
        for &e in fresh {
            let c = edge_copies(view.inst, e).min(left);
            if c > 0 {
                out.push((e, c));
                left -= c;
            }
        }
        Ok(out)
    }
}

/// Blocks each revealed edge with probability one half, a random number of copies.
pub struct RandomBlocker {
    rng: ChaCha8Rng,
}

impl RandomBlocker {
    pub fn new(seed: u64) -> Self {
        RandomBlocker { rng: crate::random::rng(seed) }
    }
}

impl BlockerPolicy for RandomBlocker {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        let mut left = view.remaining();
        let mut out = Vec::new();
        for &e in fresh {
            let cap = edge_copies(view.inst, e).min(left);
            if cap > 0 && self.rng.gen_bool(0.5) {
                let c = self.rng.gen_range(1..=cap);
                out.push((e, c));
                left -= c;
            }
        }
        Ok(out)
    }
}

/// Repeats the reveals of a recorded game, one per call.
pub struct ReplayBlocker {
    reveals: Vec<Vec<(EdgeId, u32)>>,
    next: usize,
}

impl ReplayBlocker {
    pub fn new(t: &Transcript) -> Self {
        let reveals = t
            .events
            .iter()
            .filter_map(|ev| match ev {
                Event::Reveal { edges, .. } => {
                    Some(edges.iter().filter(|r| r.blocked > 0).map(|r| (r.edge, r.blocked)).collect())
                }
                _ => None,
            })
            .collect();
        ReplayBlocker { reveals, next: 0 }
    }
}

impl BlockerPolicy for ReplayBlocker {
    fn reveal(&mut self, _: &View, _: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        let r = self.reveals.get(self.next).cloned().unwrap_or_default();
        self.next += 1;
        Ok(r)
    }
}

/// Repeats Traveller's moves of a recorded game, then resigns.
pub struct ReplayTraveller {
    actions: Vec<Action>,
    next: usize,
}

impl ReplayTraveller {
    pub fn new(t: &Transcript) -> Self {
        let mut actions = Vec::new();
        for ev in &t.events {
            match ev {
                Event::Move { edge, .. } => actions.push(Action::Move(*edge)),
                // in the locally informed model waits are implied by moves
                Event::Wait { until } if t.model == Model::U => actions.push(Action::Wait(*until)),
                _ => {}
            }
        }
        ReplayTraveller { actions, next: 0 }
    }
}

impl TravellerPolicy for ReplayTraveller {
    fn act(&mut self, _: &View) -> Result<Action> {
        let a = self.actions.get(self.next).copied().unwrap_or(Action::Resign);
        self.next += 1;
        Ok(a)
    }
}

/// Optimal play on a directed acyclic graph in the static model, from the π table.
pub struct DagTraveller {
    dag: Dag,
    pi: PiTable,
}

impl DagTraveller {
    pub fn new(inst: &Instance) -> Result<Self> {
        let dag = Dag::from_static(inst.static_graph()?)?;
        let pi = compute_pi(&dag, inst.target, inst.k)?;
        Ok(DagTraveller { dag, pi })
    }
}

impl TravellerPolicy for DagTraveller {
    fn act(&mut self, view: &View) -> Result<Action> {
        let u = view.position;
        let newly: Vec<(usize, u32)> = self
            .dag
            .out(u)
            .iter()
            .map(|&a| (a, blocked_count(view.statuses[a])))
            .filter(|&(_, c)| c > 0)
            .collect();
        let here: u32 = newly.iter().map(|&(_, c)| c).sum();
        match traveller_move(&self.dag, &self.pi, u, view.budget_spent - here, &newly) {
            Ok(a) => Ok(Action::Move(a)),
            Err(Error::NoSafeMove(_)) => Ok(Action::Resign),
            Err(e) => Err(e),
        }
    }
}

pub struct DagBlocker {
    dag: Dag,
    pi: PiTable,
}

impl DagBlocker {
    pub fn new(inst: &Instance) -> Result<Self> {
        let dag = Dag::from_static(inst.static_graph()?)?;
        let pi = compute_pi(&dag, inst.target, inst.k)?;
        Ok(DagBlocker { dag, pi })
    }
}

impl BlockerPolicy for DagBlocker {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        Ok(blocker_move(&self.dag, &self.pi, view.position, view.remaining())
            .into_iter()
            .filter(|(g, _)| fresh.contains(g))
            .collect())
    }
}

/// Optimal uninformed play, read off the solved expansion of the game's window.
pub struct UTraveller {
    strategy: UStrategy,
}

impl UTraveller {
    pub fn new(inst: &Instance, game: Game) -> Result<Self> {
        Ok(UTraveller { strategy: decide_u(inst, game.start, game.deadline)?.strategy })
    }
}

impl TravellerPolicy for UTraveller {
    fn act(&mut self, view: &View) -> Result<Action> {
        let x = &self.strategy.expansion;
        let Some(node) = x.node(view.position, view.time) else {
            return Ok(Action::Resign);
        };
        let newly: Vec<(usize, u32)> = x
            .dag
            .out(node)
            .iter()
            .filter_map(|&a| match x.origins[a] {
                ArcOrigin::Edge { edge, .. } => Some((x.dag.arc(a).group, blocked_count(view.statuses[edge]))),
                _ => None,
            })
            .filter(|&(_, c)| c > 0)
            .collect();
        let here: u32 = newly.iter().map(|&(_, c)| c).sum();
        let arc = match traveller_move(&x.dag, &self.strategy.pi, node, view.budget_spent - here, &newly) {
            Ok(a) => a,
            Err(Error::NoSafeMove(_)) => return Ok(Action::Resign),
            Err(e) => return Err(e),
        };
        Ok(match x.origins[arc] {
            ArcOrigin::Edge { edge, .. } => Action::Move(edge),
            ArcOrigin::Wait => match x.labels[x.dag.arc(arc).head] {
                NodeLabel::At { time, .. } => Action::Wait(time),
                NodeLabel::Target => Action::Resign,
            },
            ArcOrigin::Sink => Action::Resign,
        })
    }
}

pub struct UBlocker {
    strategy: UStrategy,
}

impl UBlocker {
    pub fn new(inst: &Instance, game: Game) -> Result<Self> {
        Ok(UBlocker { strategy: decide_u(inst, game.start, game.deadline)?.strategy })
    }
}

impl BlockerPolicy for UBlocker {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        let x = &self.strategy.expansion;
        let Some(node) = x.node(view.position, view.time) else {
            return Ok(Vec::new());
        };
        Ok(blocker_move(&x.dag, &self.strategy.pi, node, view.remaining())
            .into_iter()
            .filter_map(|(g, c)| x.group_edge[g].map(|e| (e, c)))
            .filter(|(e, _)| fresh.contains(e))
            .collect())
    }
}

fn li_state(view: &View) -> LiInfoState {
    LiInfoState {
        position: view.position,
        clock: view.time,
        statuses: view.statuses.to_vec(),
        visited: view.visited.to_vec(),
        budget_used: view.budget_spent,
    }
}

/// Optimal locally informed play from the exact solver.
pub struct LiTraveller<'a> {
    solver: LiSolver<'a>,
}

impl<'a> LiTraveller<'a> {
    pub fn new(inst: &'a Instance, game: Game, opts: LiOptions) -> Result<Self> {
        Ok(LiTraveller { solver: LiSolver::new(inst, game.start, game.deadline, opts)? })
    }
}

impl TravellerPolicy for LiTraveller<'_> {
    fn act(&mut self, view: &View) -> Result<Action> {
        Ok(match self.solver.traveller_choice(&li_state(view))? {
            Some(e) => Action::Move(e),
            None => Action::Resign,
        })
    }
}

pub struct LiBlocker<'a> {
    solver: LiSolver<'a>,
}

impl<'a> LiBlocker<'a> {
    pub fn new(inst: &'a Instance, game: Game, opts: LiOptions) -> Result<Self> {
        Ok(LiBlocker { solver: LiSolver::new(inst, game.start, game.deadline, opts)? })
    }
}

impl BlockerPolicy for LiBlocker<'_> {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        let g = self.solver.graph();
        Ok(self
            .solver
            .blocker_choice(&li_state(view))?
            .into_iter()
            .filter(|e| fresh.contains(e))
            .map(|e| (e, g.edge(e).copies))
            .collect())
    }
}

fn static_state(view: &View) -> StaticInfoState {
    StaticInfoState {
        position: view.position,
        visited: view.visited.to_vec(),
        statuses: view.statuses.to_vec(),
        budget_used: view.budget_spent,
    }
}

fn static_options(inst: &Instance, max_states: Option<usize>) -> Result<StaticOptions> {
    let discovery = if inst.static_graph()?.is_directed() { Discovery::Tail } else { Discovery::Incident };
    Ok(StaticOptions { discovery, max_states })
}

/// Optimal static play from the exact solver.
pub struct StaticTraveller<'a> {
    solver: StaticSolver<'a>,
}

impl<'a> StaticTraveller<'a> {
    pub fn new(inst: &'a Instance, max_states: Option<usize>) -> Result<Self> {
        Ok(StaticTraveller { solver: StaticSolver::new(inst, static_options(inst, max_states)?)? })
    }
}

impl TravellerPolicy for StaticTraveller<'_> {
    fn act(&mut self, view: &View) -> Result<Action> {
        Ok(match self.solver.traveller_plan(&static_state(view))? {
            Some(plan) if !plan.is_empty() => Action::Move(plan[0]),
            _ => Action::Resign,
        })
    }
}

pub struct StaticBlocker<'a> {
    solver: StaticSolver<'a>,
    copies: Vec<u32>,
}

impl<'a> StaticBlocker<'a> {
    pub fn new(inst: &'a Instance, max_states: Option<usize>) -> Result<Self> {
        let copies = inst.static_graph()?.edges().iter().map(|e| e.copies).collect();
        Ok(StaticBlocker { solver: StaticSolver::new(inst, static_options(inst, max_states)?)?, copies })
    }
}

impl BlockerPolicy for StaticBlocker<'_> {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>> {
        Ok(self
            .solver
            .blocker_choice(&static_state(view))?
            .into_iter()
            .filter(|e| fresh.contains(e))
            .map(|e| (e, self.copies[e]))
            .collect())
    }
}

/// Follows a fastest route assuming every undiscovered edge is open.
pub struct Greedy;

impl Greedy {
    fn temporal(view: &View) -> Result<Action> {
        let g = view.inst.temporal_graph()?;
        let game = view.game;
        let pos = view.position;
        let usable = |e: EdgeId| {
            let edge = g.edge(e);
            let open = match view.statuses[e] {
                EdgeStatus::Revealed(b) => b < edge.copies,
                EdgeStatus::Unknown => !(game.model == Model::Li && edge.touches(pos)),
            };
            open && edge.tau >= view.time
                && edge.tau >= game.start
                && game.deadline.is_none_or(|d| edge.arrival() <= d)
        };
        let mut ids: Vec<EdgeId> = (0..g.edges().len()).filter(|&e| usable(e)).collect();
        ids.sort_by_key(|&e| (g.edge(e).tau, e));
        let n = g.vertex_count();
        let mut arrival: Vec<Option<Time>> = vec![None; n];
        let mut first: Vec<Option<EdgeId>> = vec![None; n];
        arrival[pos] = Some(view.time);
        for e in ids {
            let edge = *g.edge(e);
            for (x, y) in [(edge.u, edge.v), (edge.v, edge.u)] {
                if arrival[x].is_some_and(|a| a <= edge.tau) && arrival[y].is_none_or(|b| edge.arrival() < b) {
                    arrival[y] = Some(edge.arrival());
                    first[y] = if x == pos { Some(e) } else { first[x] };
                }
            }
        }
        Ok(match first[view.inst.target] {
            Some(e) if game.model == Model::U && g.edge(e).tau > view.time => Action::Wait(g.edge(e).tau),
            Some(e) => Action::Move(e),
            None => Action::Resign,
        })
    }

    fn weighted(view: &View) -> Result<Action> {
        let g = view.inst.static_graph()?;
        let n = g.vertex_count();
        let mut dist = vec![Cost::UNREACHABLE; n];
        let mut first: Vec<Option<EdgeId>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[view.position] = Cost::ZERO;
        heap.push(Reverse((Cost::ZERO, view.position)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            for &e in g.out(x) {
                let edge = g.edge(e);
                if blocked_count(view.statuses[e]) >= edge.copies {
                    continue;
                }
                let y = edge.other(x);
                let nd = d + edge.weight;
                if nd < dist[y] {
                    dist[y] = nd;
                    first[y] = if x == view.position { Some(e) } else { first[x] };
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        Ok(first[view.inst.target].map_or(Action::Resign, Action::Move))
    }
}

impl TravellerPolicy for Greedy {
    fn act(&mut self, view: &View) -> Result<Action> {
        match view.game.model {
            Model::Li | Model::U => Greedy::temporal(view),
            Model::Static => Greedy::weighted(view),
        }
    }
}

/// Traveller by name: `optimal`, `greedy` or `dag`.
pub fn builtin_traveller<'a>(
    name: &str,
    inst: &'a Instance,
    game: Game,
    max_states: Option<usize>,
) -> Result<Box<dyn TravellerPolicy + 'a>> {
    Ok(match (name, game.model) {
        ("greedy", _) => Box::new(Greedy),
        ("dag", Model::Static) => Box::new(DagTraveller::new(inst)?),
        ("optimal", Model::Li) => Box::new(LiTraveller::new(inst, game, LiOptions { max_states })?),
        ("optimal", Model::U) => Box::new(UTraveller::new(inst, game)?),
        ("optimal", Model::Static) => Box::new(StaticTraveller::new(inst, max_states)?),
        _ => return Err(Error::InvalidArgument(format!("no traveller `{name}` for the {} model", game.model))),
    })
}

/// Blocker by name: `none`, `all`, `random`, `optimal` or `dag`.
pub fn builtin_blocker<'a>(
    name: &str,
    inst: &'a Instance,
    game: Game,
    seed: u64,
    max_states: Option<usize>,
) -> Result<Box<dyn BlockerPolicy + 'a>> {
    Ok(match (name, game.model) {
        ("none", _) => Box::new(NoBlock),
        ("all", _) => Box::new(BlockAll),
        ("random", _) => Box::new(RandomBlocker::new(seed)),
        ("dag", Model::Static) => Box::new(DagBlocker::new(inst)?),
        ("optimal", Model::Li) => Box::new(LiBlocker::new(inst, game, LiOptions { max_states })?),
        ("optimal", Model::U) => Box::new(UBlocker::new(inst, game)?),
        ("optimal", Model::Static) => Box::new(StaticBlocker::new(inst, max_states)?),
        _ => return Err(Error::InvalidArgument(format!("no blocker `{name}` for the {} model", game.model))),
    })
}
