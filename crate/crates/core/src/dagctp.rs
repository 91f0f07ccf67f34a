//! Canadian Traveller games on weighted DAGs.
//!
//! Blocked arcs are discovered at their tail: when Traveller first arrives at a
//! node, Blocker decides which copies of the arcs leaving it are blocked.
//! Arcs are grouped; a group is one blockable unit with a copy count, and
//! blocking all of its copies removes every member arc.
//!
//! `π_i(v)` is the cost Traveller can guarantee from `v` to the target when
//! Blocker has `i` blocks left. With `c_j(v)` the multiset of candidate values
//! `π_j(head) + weight` (one entry per group copy),
//! `π_i(v) = max over m in 0..=i of the (m+1)-th smallest entry of c_{i-m}(v)`.

use std::collections::HashMap;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::StaticGraph;

pub type NodeId = usize;
pub type ArcId = usize;
pub type GroupId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: u64,
    pub group: GroupId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    arcs: Vec<Arc>,
    group_copies: Vec<u32>,
    out: Vec<Vec<ArcId>>,
}

impl Dag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> NodeId {
        self.names.push(name.into());
        self.out.push(Vec::new());
        self.names.len() - 1
    }

    pub fn add_group(&mut self, copies: u32) -> GroupId {
        assert!(copies >= 1, "a group needs at least one copy");
        self.group_copies.push(copies);
        self.group_copies.len() - 1
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, weight: u64, group: GroupId) -> ArcId {
        assert!(tail < self.names.len() && head < self.names.len());
        assert!(group < self.group_copies.len());
        self.arcs.push(Arc { tail, head, weight, group });
        let id = self.arcs.len() - 1;
        self.out[tail].push(id);
        id
    }

    /// Adds an arc in a fresh group of its own.
    pub fn add_simple_arc(&mut self, tail: NodeId, head: NodeId, weight: u64, copies: u32) -> ArcId {
        let g = self.add_group(copies);
        self.add_arc(tail, head, weight, g)
    }

    /// One node per vertex and one group per edge; the graph must be directed.
    pub fn from_static(g: &StaticGraph) -> Result<Self> {
        if !g.is_directed() {
            return Err(Error::WrongModel { expected: "dag", found: "static" });
        }
        let mut dag = Dag::new();
        for name in g.vertices().names() {
            dag.add_node(name.clone());
        }
        for e in g.edges() {
            dag.add_simple_arc(e.u, e.v, e.weight, e.copies);
        }
        topological_order(&dag)?;
        Ok(dag)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcId) -> &Arc {
        &self.arcs[a]
    }

    pub fn out(&self, v: NodeId) -> &[ArcId] {
        &self.out[v]
    }

    pub fn group_count(&self) -> usize {
        self.group_copies.len()
    }

    pub fn group_copies(&self, g: GroupId) -> u32 {
        self.group_copies[g]
    }

    /// Groups with at least one arc leaving `v`, in order of first arc id.
    pub fn out_groups(&self, v: NodeId) -> Vec<GroupId> {
        let mut gs: Vec<GroupId> = Vec::new();
        for &a in &self.out[v] {
            let g = self.arcs[a].group;
            if !gs.contains(&g) {
                gs.push(g);
            }
        }
        gs
    }
}

/// Kahn's algorithm; ties resolved by smallest node id.
pub fn topological_order(dag: &Dag) -> Result<Vec<NodeId>> {
    let n = dag.node_count();
    let mut indeg = vec![0usize; n];
    for a in dag.arcs() {
        indeg[a.head] += 1;
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<NodeId>> =
        (0..n).filter(|&v| indeg[v] == 0).map(std::cmp::Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(v);
        for &a in dag.out(v) {
            let h = dag.arc(a).head;
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.push(std::cmp::Reverse(h));
            }
        }
    }
    if order.len() != n {
        return Err(Error::Cycle);
    }
    Ok(order)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiTable {
    k: u32,
    values: Vec<Vec<Cost>>,
}

impl PiTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `π_i(v)`.
    pub fn get(&self, v: NodeId, i: u32) -> Cost {
        self.values[v][i as usize]
    }

    pub fn row(&self, v: NodeId) -> &[Cost] {
        &self.values[v]
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }
}

/// Candidate entries `(value, copies, first arc)` at `v` under budget index `j`.
fn candidates(dag: &Dag, values: &[Vec<Cost>], v: NodeId, j: usize) -> Vec<(Cost, u32, ArcId)> {
    let mut best: HashMap<GroupId, (Cost, ArcId)> = HashMap::new();
    for &a in dag.out(v) {
        let arc = dag.arc(a);
        let c = values[arc.head][j] + arc.weight;
        best.entry(arc.group)
            .and_modify(|e| {
                if c < e.0 {
                    *e = (c, a)
                }
            })
            .or_insert((c, a));
    }
    let mut list: Vec<(Cost, u32, ArcId)> = best
        .into_iter()
        .map(|(g, (c, a))| (c, dag.group_copies(g), a))
        .collect();
    list.sort_by_key(|&(c, _, a)| (c, a));
    list
}

/// The `r`-th smallest entry (0-based) once every candidate is repeated by its copies.
fn nth_smallest(list: &[(Cost, u32, ArcId)], r: u64) -> Cost {
    let mut seen = 0u64;
    for &(c, copies, _) in list {
        seen += copies as u64;
        if seen > r {
            return c;
        }
    }
    Cost::UNREACHABLE
}

pub fn compute_pi(dag: &Dag, t: NodeId, k: u32) -> Result<PiTable> {
    let order = topological_order(dag)?;
    compute_pi_in_order(dag, t, k, &order)
}

/// Same as [`compute_pi`] with a caller-supplied topological order.
pub fn compute_pi_in_order(dag: &Dag, t: NodeId, k: u32, order: &[NodeId]) -> Result<PiTable> {
    let n = dag.node_count();
    if t >= n {
        return Err(Error::UnknownTarget(t.to_string()));
    }
    let width = k as usize + 1;
    let mut values = vec![vec![Cost::UNREACHABLE; width]; n];
    for &v in order.iter().rev() {
        if v == t {
            values[v] = vec![Cost::ZERO; width];
            continue;
        }
        if dag.out(v).is_empty() {
            continue;
        }
        // stat[j][r]: (r+1)-th smallest candidate under budget index j, for r <= k - j
        let stat: Vec<Vec<Cost>> = (0..width)
            .map(|j| {
                let list = candidates(dag, &values, v, j);
                (0..width - j).map(|r| nth_smallest(&list, r as u64)).collect()
            })
            .collect();
        for i in 0..width {
            values[v][i] = (0..=i).map(|m| stat[i - m][m]).max().unwrap_or(Cost::UNREACHABLE);
        }
    }
    Ok(PiTable { k, values })
}

/// Traveller wins with deadline `deadline` iff `π_k(s) <= deadline`.
pub fn decide_dag(dag: &Dag, s: NodeId, t: NodeId, k: u32, deadline: u64) -> Result<bool> {
    let pi = compute_pi(dag, t, k)?;
    Ok(pi.get(s, k).value().is_some_and(|v| v <= deadline))
}

/// Traveller's reply at `u` after Blocker revealed `newly_blocked` (group, copies
/// blocked) there, `blocked_before` copies having been blocked earlier. Picks the
/// usable arc minimising `π_i(head) + weight` with `i` the budget still left.
pub fn traveller_move(
    dag: &Dag,
    pi: &PiTable,
    u: NodeId,
    blocked_before: u32,
    newly_blocked: &[(GroupId, u32)],
) -> Result<ArcId> {
    let spent = blocked_before as u64 + newly_blocked.iter().map(|&(_, c)| c as u64).sum::<u64>();
    if spent > pi.k() as u64 {
        return Err(Error::InvalidArgument(format!(
            "{spent} copies blocked with budget {}",
            pi.k()
        )));
    }
    let i = pi.k() - spent as u32;
    let blocked = |g: GroupId| {
        newly_blocked
            .iter()
            .filter(|&&(h, _)| h == g)
            .map(|&(_, c)| c)
            .sum::<u32>()
    };
    let mut best: Option<(Cost, ArcId)> = None;
    for &a in dag.out(u) {
        let arc = dag.arc(a);
        if blocked(arc.group) >= dag.group_copies(arc.group) {
            continue;
        }
        let c = pi.get(arc.head, i) + arc.weight;
        if c.is_finite() && best.is_none_or(|(b, _)| c < b) {
            best = Some((c, a));
        }
    }
    best.map(|(_, a)| a).ok_or(Error::NoSafeMove(u))
}

/// Blocker's reveal on Traveller's arrival at `u` with `remaining` blocks left:
/// choose the `m` attaining `π_remaining(u)` (smallest such `m`) and block the
/// `m` cheapest candidate copies under `π_{remaining-m}`.
pub fn blocker_move(dag: &Dag, pi: &PiTable, u: NodeId, remaining: u32) -> Vec<(GroupId, u32)> {
    let remaining = remaining.min(pi.k()) as usize;
    let values = &pi.values;
    let mut best: Option<(Cost, usize)> = None;
    for m in 0..=remaining {
        let list = candidates(dag, values, u, remaining - m);
        let c = nth_smallest(&list, m as u64);
        if best.is_none_or(|(b, _)| c > b) {
            best = Some((c, m));
        }
    }
    let m = match best {
        Some((_, m)) if m > 0 => m,
        _ => return Vec::new(),
    };
    let list = candidates(dag, values, u, remaining - m);
    let mut left = m as u32;
    let mut out = Vec::new();
    for (_, copies, a) in list {
        if left == 0 {
            break;
        }
        let take = copies.min(left);
        out.push((dag.arc(a).group, take));
        left -= take;
    }
    out
}

/// Limit on memoised states per node for [`brute_dag_game`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub per_node_states: Option<usize>,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { per_node_states: Some(20) }
    }
}

impl Guard {
    pub fn unlimited() -> Self {
        Guard { per_node_states: None }
    }
}

/// Node, budget left, and the decided groups that still matter.
type BruteKey = (NodeId, u32, Vec<(GroupId, u32)>);

struct Brute<'a> {
    dag: &'a Dag,
    t: NodeId,
    reach: Vec<Vec<bool>>,
    memo: HashMap<BruteKey, Cost>,
    per_node: Vec<usize>,
    guard: Guard,
}

impl Brute<'_> {
    fn relevant(&self, v: NodeId, decided: &[(GroupId, u32)]) -> Vec<(GroupId, u32)> {
        decided
            .iter()
            .copied()
            .filter(|&(g, _)| {
                self.dag
                    .arcs()
                    .iter()
                    .any(|a| a.group == g && self.reach[v][a.tail])
            })
            .collect()
    }

    fn value(&mut self, v: NodeId, remaining: u32, decided: Vec<(GroupId, u32)>) -> Result<Cost> {
        if v == self.t {
            return Ok(Cost::ZERO);
        }
        let decided = self.relevant(v, &decided);
        let key = (v, remaining, decided.clone());
        if let Some(&c) = self.memo.get(&key) {
            return Ok(c);
        }
        self.per_node[v] += 1;
        if let Some(limit) = self.guard.per_node_states {
            if self.per_node[v] > limit {
                return Err(Error::SizeLimit(format!(
                    "more than {limit} information states at node {}",
                    self.dag.name(v)
                )));
            }
        }
        let fresh: Vec<GroupId> = self
            .dag
            .out_groups(v)
            .into_iter()
            .filter(|g| !decided.iter().any(|&(h, _)| h == *g))
            .collect();
        let mut worst = Cost::ZERO;
        let mut counts = vec![0u32; fresh.len()];
        loop {
            let used: u32 = counts.iter().sum();
            if used <= remaining {
                let mut now = decided.clone();
                now.extend(fresh.iter().copied().zip(counts.iter().copied()));
                now.sort_unstable();
                let mut best = Cost::UNREACHABLE;
                for &a in self.dag.out(v) {
                    let arc = *self.dag.arc(a);
                    let blocked = now.iter().find(|&&(g, _)| g == arc.group).map_or(0, |x| x.1);
                    if blocked >= self.dag.group_copies(arc.group) {
                        continue;
                    }
                    let c = self.value(arc.head, remaining - used, now.clone())? + arc.weight;
                    best = best.min(c);
                }
                worst = worst.max(best);
            }
            // next count vector
            let mut i = 0;
            while i < fresh.len() {
                if counts[i] < self.dag.group_copies(fresh[i]) {
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
        self.memo.insert(key, worst);
        Ok(worst)
    }
}

/// Exhaustive minimax value of the DAG game: Blocker may block any number of
/// copies of any group leaving the node Traveller just reached.
pub fn brute_dag_game(dag: &Dag, s: NodeId, t: NodeId, k: u32, guard: Guard) -> Result<Cost> {
    let order = topological_order(dag)?;
    let n = dag.node_count();
    let mut reach = vec![vec![false; n]; n];
    for &v in order.iter().rev() {
        reach[v][v] = true;
        for &a in dag.out(v) {
            let h = dag.arc(a).head;
            for x in 0..n {
                if reach[h][x] {
                    reach[v][x] = true;
                }
            }
        }
    }
    let mut b = Brute { dag, t, reach, memo: HashMap::new(), per_node: vec![0; n], guard };
    b.value(s, k, Vec::new())
}
