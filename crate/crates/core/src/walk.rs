use serde::{Deserialize, Serialize};

use crate::graph::{TemporalGraph, Time, Vertex};

/// One traversal: leave `from` at time `tau` along edge `(from, to, tau, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkStep {
    pub from: Vertex,
    pub to: Vertex,
    pub tau: Time,
    pub d: Time,
}

impl WalkStep {
    pub fn arrival(&self) -> Time {
        self.tau + self.d
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalWalk {
    pub start: Vertex,
    pub steps: Vec<WalkStep>,
}

impl TemporalWalk {
    pub fn at(start: Vertex) -> Self {
        TemporalWalk { start, steps: Vec::new() }
    }

    pub fn end(&self) -> Vertex {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn arrival(&self) -> Option<Time> {
        self.steps.last().map(WalkStep::arrival)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkCheck {
    pub valid: bool,
    /// Index of the first offending step.
    pub first_violation: Option<usize>,
}

/// Checks that every step uses an existing edge, steps are joined end to start,
/// and each departure is no earlier than the previous arrival.
pub fn validate_walk(g: &TemporalGraph, w: &TemporalWalk) -> WalkCheck {
    let mut at = w.start;
    let mut clock: Option<Time> = None;
    for (i, step) in w.steps.iter().enumerate() {
        let ok = step.from == at
            && step.from < g.vertex_count()
            && step.to < g.vertex_count()
            && g.find_edge(step.from, step.to, step.tau, step.d).is_some()
            && clock.is_none_or(|c| c <= step.tau);
        if !ok {
            return WalkCheck { valid: false, first_violation: Some(i) };
        }
        at = step.to;
        clock = Some(step.arrival());
    }
    WalkCheck { valid: w.start < g.vertex_count(), first_violation: None }
}
