//! Referee for Traveller/Blocker games under the locally informed, uninformed
//! and static rules, with transcripts and exhaustive strategy verification.

mod policies;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeStatus, StaticGraph, TemporalGraph, Time, Vertex};
use crate::instance::Instance;

pub use policies::{
    builtin_blocker, builtin_traveller, BlockAll, DagBlocker, DagTraveller, Greedy, LiBlocker, LiTraveller, NoBlock,
    PolicyFn, RandomBlocker, ReplayBlocker, ReplayTraveller, StaticBlocker, StaticTraveller, UBlocker, UTraveller,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Temporal graph; incident edges are revealed on arrival at a vertex.
    Li,
    /// Temporal graph; an edge is revealed only at its departure time.
    U,
    /// Weighted graph; edges leaving a vertex are revealed on its first visit.
    Static,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "li" => Ok(Model::Li),
            "u" => Ok(Model::U),
            "static" => Ok(Model::Static),
            other => Err(Error::InvalidArgument(format!("unknown model `{other}`"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Li => "li",
            Model::U => "u",
            Model::Static => "static",
        })
    }
}

/// Rules of one game: the model, the start time and the deadline.
/// In the static model time is the distance travelled so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Game {
    pub model: Model,
    pub start: Time,
    pub deadline: Option<Time>,
}

impl Game {
    pub fn new(model: Model) -> Self {
        Game { model, start: 0, deadline: None }
    }

    pub fn window(mut self, start: Time, deadline: Option<Time>) -> Self {
        self.start = start;
        self.deadline = deadline;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Traveller,
    Blocker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    TravellerWin,
    BlockerWin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    Reached,
    /// Traveller reached the target, or can no longer reach it, after the deadline.
    Late,
    Resigned,
    /// Traveller waited past the last departure.
    Stuck,
    StepLimit,
    Foul,
}

/// What Traveller does after the reveal at the current position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    /// Take an edge; in the locally informed model this waits for its departure first.
    Move(EdgeId),
    /// Stay put until the given time (temporal models only).
    Wait(Time),
    Resign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealedEdge {
    pub edge: EdgeId,
    pub label: String,
    pub copies: u32,
    pub blocked: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Reveal { vertex: String, time: Time, edges: Vec<RevealedEdge> },
    Move { edge: EdgeId, from: String, to: String, depart: Time, arrive: Time },
    Wait { until: Time },
    Foul { player: Player, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub model: Model,
    pub events: Vec<Event>,
    pub outcome: Outcome,
    pub reason: EndReason,
    pub final_time: Time,
    pub budget_spent: u32,
}

#[derive(Serialize, Deserialize)]
struct EndLine {
    event: String,
    model: Model,
    outcome: Outcome,
    reason: EndReason,
    final_time: Time,
    budget_spent: u32,
}

impl Transcript {
    /// One JSON object per event, then a closing `"event": "end"` line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        let end = EndLine {
            event: "end".into(),
            model: self.model,
            outcome: self.outcome,
            reason: self.reason,
            final_time: self.final_time,
            budget_spent: self.budget_spent,
        };
        out.push_str(&serde_json::to_string(&end).expect("end line serializes"));
        out.push('\n');
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut events = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(line)?;
            if value.get("event").and_then(|v| v.as_str()) == Some("end") {
                let end: EndLine = serde_json::from_value(value)?;
                return Ok(Transcript {
                    model: end.model,
                    events,
                    outcome: end.outcome,
                    reason: end.reason,
                    final_time: end.final_time,
                    budget_spent: end.budget_spent,
                });
            }
            events.push(serde_json::from_value(value).map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?);
        }
        Err(Error::Parse { line: text.lines().count(), message: "transcript has no end line".into() })
    }

    pub fn traveller_won(&self) -> bool {
        self.outcome == Outcome::TravellerWin
    }
}

/// Everything a policy may look at.
#[derive(Clone, Copy, Debug)]
pub struct View<'v> {
    pub inst: &'v Instance,
    pub game: Game,
    pub position: Vertex,
    pub time: Time,
    pub statuses: &'v [EdgeStatus],
    /// Vertices whose reveal has already happened.
    pub visited: &'v [bool],
    pub budget_spent: u32,
}

impl View<'_> {
    pub fn remaining(&self) -> u32 {
        self.inst.k.saturating_sub(self.budget_spent)
    }
}

/// Traveller's side. Policies should answer the same view the same way;
/// exhaustive verification relies on it.
pub trait TravellerPolicy {
    fn act(&mut self, view: &View) -> Result<Action>;
}

/// Blocker's side: on a reveal of `fresh`, how many copies of each to block.
pub trait BlockerPolicy {
    fn reveal(&mut self, view: &View, fresh: &[EdgeId]) -> Result<Vec<(EdgeId, u32)>>;
}

#[derive(Clone, Copy)]
enum Board<'a> {
    Temporal(&'a TemporalGraph),
    Static(&'a StaticGraph),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    pos: Vertex,
    time: Time,
    statuses: Vec<EdgeStatus>,
    visited: Vec<bool>,
    spent: u32,
    steps: usize,
}

enum Step {
    Continue,
    End(Outcome, EndReason),
}

struct Referee<'a> {
    inst: &'a Instance,
    game: Game,
    board: Board<'a>,
    max_steps: usize,
}

impl<'a> Referee<'a> {
    fn new(inst: &'a Instance, game: Game) -> Result<Self> {
        let board = match game.model {
            Model::Li | Model::U => Board::Temporal(inst.temporal_graph()?),
            Model::Static => Board::Static(inst.static_graph()?),
        };
        let (n, m) = match board {
            Board::Temporal(g) => (g.vertex_count(), g.edges().len()),
            Board::Static(g) => (g.vertex_count(), g.edges().len()),
        };
        Ok(Referee { inst, game, board, max_steps: (n + m + 1) * (n + 1) })
    }

    fn initial(&self) -> State {
        let (n, m) = match self.board {
            Board::Temporal(g) => (g.vertex_count(), g.edges().len()),
            Board::Static(g) => (g.vertex_count(), g.edges().len()),
        };
        State {
            pos: self.inst.source,
            time: self.game.start,
            statuses: vec![EdgeStatus::Unknown; m],
            visited: vec![false; n],
            spent: 0,
            steps: 0,
        }
    }

    fn view<'v>(&'v self, st: &'v State) -> View<'v> {
        View {
            inst: self.inst,
            game: self.game,
            position: st.pos,
            time: st.time,
            statuses: &st.statuses,
            visited: &st.visited,
            budget_spent: st.spent,
        }
    }

    fn copies(&self, e: EdgeId) -> u32 {
        match self.board {
            Board::Temporal(g) => g.edge(e).copies,
            Board::Static(g) => g.edge(e).copies,
        }
    }

    fn label(&self, e: EdgeId) -> String {
        match self.board {
            Board::Temporal(g) => g.edge_label(e),
            Board::Static(g) => g.edge_label(e),
        }
    }

    fn in_window(&self, g: &TemporalGraph, e: EdgeId, now: Time) -> bool {
        let edge = g.edge(e);
        edge.tau >= now && edge.tau >= self.game.start && self.game.deadline.is_none_or(|t2| edge.arrival() <= t2)
    }

    /// Edges whose status Blocker fixes right now.
    fn pending(&self, st: &State) -> Vec<EdgeId> {
        let unknown = |e: &EdgeId| st.statuses[*e] == EdgeStatus::Unknown;
        match (self.game.model, self.board) {
            (Model::Li, Board::Temporal(g)) => g
                .incident(st.pos)
                .iter()
                .copied()
                .filter(unknown)
                .filter(|&e| self.in_window(g, e, st.time))
                .collect(),
            (Model::U, Board::Temporal(g)) => g
                .incident(st.pos)
                .iter()
                .copied()
                .filter(unknown)
                .filter(|&e| g.edge(e).tau == st.time && self.in_window(g, e, st.time))
                .collect(),
            (_, Board::Static(g)) => g.out(st.pos).iter().copied().filter(unknown).collect(),
            _ => unreachable!("board matches the model"),
        }
    }

    fn apply_block(&self, st: &mut State, fresh: &[EdgeId], action: &[(EdgeId, u32)]) -> std::result::Result<Event, String> {
        let mut counts = vec![0u32; fresh.len()];
        for &(e, c) in action {
            let Some(i) = fresh.iter().position(|&f| f == e) else {
                return Err(format!("edge {} is not being revealed", self.label(e)));
            };
            counts[i] += c;
            if counts[i] > self.copies(e) {
                return Err(format!("blocked {} copies of {}", counts[i], self.label(e)));
            }
        }
        let total: u32 = counts.iter().sum();
        if st.spent + total > self.inst.k {
            return Err(format!("blocks {} edges with {} left", total, self.inst.k - st.spent));
        }
        st.spent += total;
        let mut edges = Vec::new();
        for (&e, &c) in fresh.iter().zip(&counts) {
            st.statuses[e] = EdgeStatus::Revealed(c);
            edges.push(RevealedEdge { edge: e, label: self.label(e), copies: self.copies(e), blocked: c });
        }
        Ok(Event::Reveal { vertex: self.inst.vertex_name(st.pos).to_string(), time: st.time, edges })
    }

    fn terminal(&self, st: &State) -> Option<(Outcome, EndReason)> {
        let late = self.game.deadline.is_some_and(|d| st.time > d);
        if st.pos == self.inst.target {
            return Some(if late {
                (Outcome::BlockerWin, EndReason::Late)
            } else {
                (Outcome::TravellerWin, EndReason::Reached)
            });
        }
        if late {
            return Some((Outcome::BlockerWin, EndReason::Late));
        }
        if st.steps >= self.max_steps {
            return Some((Outcome::BlockerWin, EndReason::StepLimit));
        }
        None
    }

    fn passable(&self, st: &State, e: EdgeId) -> bool {
        matches!(st.statuses[e], EdgeStatus::Revealed(b) if b < self.copies(e))
    }

    /// Applies Traveller's action, appending its events.
    fn apply_action(&self, st: &mut State, action: Action, events: &mut Vec<Event>) -> Step {
        st.steps += 1;
        let foul = |events: &mut Vec<Event>, reason: String| {
            events.push(Event::Foul { player: Player::Traveller, reason });
            Step::End(Outcome::BlockerWin, EndReason::Foul)
        };
        let n_edges = st.statuses.len();
        match action {
            Action::Resign => Step::End(Outcome::BlockerWin, EndReason::Resigned),
            Action::Wait(until) => {
                let Board::Temporal(g) = self.board else {
                    return foul(events, "waiting in the static model".into());
                };
                if until <= st.time {
                    return foul(events, format!("wait until {until} at time {}", st.time));
                }
                events.push(Event::Wait { until });
                st.time = until;
                if until > g.horizon() {
                    return Step::End(Outcome::BlockerWin, EndReason::Stuck);
                }
                Step::Continue
            }
            Action::Move(e) if e >= n_edges => foul(events, format!("no edge {e}")),
            Action::Move(e) => {
                let from = st.pos;
                let (to, depart, arrive) = match self.board {
                    Board::Temporal(g) => {
                        let edge = g.edge(e);
                        if !edge.touches(from) {
                            return foul(events, format!("{} does not leave {}", g.edge_label(e), self.inst.vertex_name(from)));
                        }
                        let ok_time = match self.game.model {
                            Model::U => edge.tau == st.time,
                            _ => edge.tau >= st.time,
                        };
                        if !ok_time || edge.tau < self.game.start {
                            return foul(events, format!("{} cannot be taken at time {}", g.edge_label(e), st.time));
                        }
                        (edge.other(from), edge.tau, edge.arrival())
                    }
                    Board::Static(g) => {
                        if !g.out(from).contains(&e) {
                            return foul(events, format!("{} does not leave {}", g.edge_label(e), self.inst.vertex_name(from)));
                        }
                        (g.edge(e).other(from), st.time, st.time.saturating_add(g.edge(e).weight))
                    }
                };
                if !self.passable(st, e) {
                    return foul(events, format!("{} is not known to be open", self.label(e)));
                }
                if depart > st.time {
                    events.push(Event::Wait { until: depart });
                }
                events.push(Event::Move {
                    edge: e,
                    from: self.inst.vertex_name(from).to_string(),
                    to: self.inst.vertex_name(to).to_string(),
                    depart,
                    arrive,
                });
                st.pos = to;
                st.time = arrive;
                Step::Continue
            }
        }
    }

    fn finish(&self, st: &State, events: Vec<Event>, outcome: Outcome, reason: EndReason) -> Transcript {
        Transcript {
            model: self.game.model,
            events,
            outcome,
            reason,
            final_time: st.time,
            budget_spent: st.spent,
        }
    }
}

/// Referees one game. Illegal moves end the game with a foul against the offender.
pub fn play(
    inst: &Instance,
    traveller: &mut dyn TravellerPolicy,
    blocker: &mut dyn BlockerPolicy,
    game: Game,
) -> Result<Transcript> {
    let referee = Referee::new(inst, game)?;
    let mut st = referee.initial();
    let mut events = Vec::new();
    loop {
        if let Some((outcome, reason)) = referee.terminal(&st) {
            return Ok(referee.finish(&st, events, outcome, reason));
        }
        let fresh = referee.pending(&st);
        if !fresh.is_empty() {
            let action = blocker.reveal(&referee.view(&st), &fresh)?;
            match referee.apply_block(&mut st, &fresh, &action) {
                Ok(ev) => events.push(ev),
                Err(reason) => {
                    events.push(Event::Foul { player: Player::Blocker, reason });
                    return Ok(referee.finish(&st, events, Outcome::TravellerWin, EndReason::Foul));
                }
            }
        }
        st.visited[st.pos] = true;
        let action = traveller.act(&referee.view(&st))?;
        if let Step::End(outcome, reason) = referee.apply_action(&mut st, action, &mut events) {
            return Ok(referee.finish(&st, events, outcome, reason));
        }
    }
}

/// Bound on the states explored by [`verify_traveller_strategy`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyLimits {
    pub max_states: Option<usize>,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits { max_states: Some(1_000_000) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    /// A game Traveller loses, when `holds` is false.
    pub counterexample: Option<Transcript>,
    pub states: usize,
}

/// Every way to block at most `budget` copies among `fresh`.
fn block_options(referee: &Referee, fresh: &[EdgeId], budget: u32) -> Vec<Vec<(EdgeId, u32)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        referee: &Referee,
        fresh: &[EdgeId],
        i: usize,
        left: u32,
        cur: &mut Vec<(EdgeId, u32)>,
        out: &mut Vec<Vec<(EdgeId, u32)>>,
    ) {
        if i == fresh.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=referee.copies(fresh[i]).min(left) {
            if c > 0 {
                cur.push((fresh[i], c));
            }
            rec(referee, fresh, i + 1, left - c, cur, out);
            if c > 0 {
                cur.pop();
            }
        }
    }
    rec(referee, fresh, 0, budget, &mut cur, &mut out);
    out
}

struct Explorer<'a, 'p> {
    referee: Referee<'a>,
    traveller: &'p mut dyn TravellerPolicy,
    won: HashSet<State>,
    visits: usize,
    limits: VerifyLimits,
}

impl Explorer<'_, '_> {
    /// A losing transcript from `st`, or `None` if Traveller wins against every Blocker.
    fn explore(&mut self, mut st: State, mut events: Vec<Event>) -> Result<Option<Transcript>> {
        loop {
            if let Some((outcome, reason)) = self.referee.terminal(&st) {
                return Ok(match outcome {
                    Outcome::TravellerWin => None,
                    Outcome::BlockerWin => Some(self.referee.finish(&st, events, outcome, reason)),
                });
            }
            let fresh = self.referee.pending(&st);
            if !fresh.is_empty() {
                return self.branch(st, events, &fresh);
            }
            if let Some(lost) = self.traveller_step(&mut st, &mut events)? {
                return Ok(Some(lost));
            }
        }
    }

    fn traveller_step(&mut self, st: &mut State, events: &mut Vec<Event>) -> Result<Option<Transcript>> {
        st.visited[st.pos] = true;
        let action = self.traveller.act(&self.referee.view(st))?;
        if let Step::End(outcome, reason) = self.referee.apply_action(st, action, events) {
            let t = self.referee.finish(st, std::mem::take(events), outcome, reason);
            return Ok((outcome == Outcome::BlockerWin).then_some(t));
        }
        Ok(None)
    }

    fn branch(&mut self, st: State, events: Vec<Event>, fresh: &[EdgeId]) -> Result<Option<Transcript>> {
        if self.won.contains(&st) {
            return Ok(None);
        }
        self.visits += 1;
        if self.limits.max_states.is_some_and(|m| self.visits > m) {
            return Err(Error::SizeLimit(format!("more than {} game states", self.visits - 1)));
        }
        let remaining = self.referee.inst.k - st.spent;
        for option in block_options(&self.referee, fresh, remaining) {
            let mut next = st.clone();
            let mut evs = events.clone();
            let ev = self.referee.apply_block(&mut next, fresh, &option).expect("enumerated blocks are legal");
            evs.push(ev);
            if let Some(lost) = self.traveller_step(&mut next, &mut evs)? {
                return Ok(Some(lost));
            }
            if let Some(lost) = self.explore(next, evs)? {
                return Ok(Some(lost));
            }
        }
        self.won.insert(st);
        Ok(None)
    }
}

/// Plays `traveller` against every Blocker behaviour, including partial
/// blocks of parallel copies. Holds iff every game is won by the deadline in `game`.
pub fn verify_traveller_strategy(
    inst: &Instance,
    traveller: &mut dyn TravellerPolicy,
    game: Game,
    limits: VerifyLimits,
) -> Result<Verification> {
    let referee = Referee::new(inst, game)?;
    let st = referee.initial();
    let mut ex = Explorer { referee, traveller, won: HashSet::new(), visits: 0, limits };
    let lost = ex.explore(st, Vec::new())?;
    Ok(Verification { holds: lost.is_none(), counterexample: lost, states: ex.visits })
}

#[cfg(test)]
mod tests;
