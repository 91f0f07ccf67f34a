//! Temporal and static multigraphs.
//!
//! Parallel copies of an edge are stored as a count on a single record. Both
//! graph types keep their edges canonical: undirected edges are oriented with
//! `u < v` (vertex index order), records are sorted by key, and records sharing
//! a key are merged by summing copies.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;
pub type Time = u64;

/// What Traveller knows about one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeStatus {
    Unknown,
    /// Revealed, with this many copies blocked.
    Revealed(u32),
}

/// Interned vertex names. The index of a name is its vertex id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vertices {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('#')
        && !name.chars().any(|c| c.is_whitespace() || c == '"')
}

impl Vertices {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vs = Vertices::new();
        for name in names {
            let name = name.into();
            if vs.index.contains_key(&name) {
                return Err(Error::DuplicateVertex(name));
            }
            vs.insert(&name)?;
        }
        Ok(vs)
    }

    /// Returns the id of `name`, adding it if absent.
    pub fn insert(&mut self, name: &str) -> Result<Vertex> {
        if let Some(&v) = self.index.get(name) {
            return Ok(v);
        }
        if !valid_name(name) {
            return Err(Error::InvalidVertexName(name.to_string()));
        }
        let v = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        Ok(v)
    }

    pub fn id(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// An undirected time edge `(u, v, tau, d)` with `copies` parallel copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TimeEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub tau: Time,
    pub d: Time,
    pub copies: u32,
}

impl TimeEdge {
    pub fn new(u: Vertex, v: Vertex, tau: Time, d: Time, copies: u32) -> Self {
        TimeEdge { u, v, tau, d, copies }
    }

    pub fn key(&self) -> (Vertex, Vertex, Time, Time) {
        (self.u, self.v, self.tau, self.d)
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    pub fn arrival(&self) -> Time {
        self.tau + self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalGraph {
    vertices: Vertices,
    edges: Vec<TimeEdge>,
    incident: Vec<Vec<EdgeId>>,
}

impl TemporalGraph {
    pub fn new(vertices: Vertices, edges: impl IntoIterator<Item = TimeEdge>) -> Result<Self> {
        let n = vertices.len();
        let mut list = Vec::new();
        for mut e in edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidEdge(format!(
                    "endpoint out of range in ({}, {}, {}, {})",
                    e.u, e.v, e.tau, e.d
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidEdge(format!("self-loop at `{}`", vertices.name(e.u))));
            }
            if e.d == 0 {
                return Err(Error::InvalidEdge("travel time must be at least 1".into()));
            }
            if e.copies == 0 {
                return Err(Error::InvalidEdge("copies must be at least 1".into()));
            }
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
            list.push(e);
        }
        list.sort_by_key(|e| e.key());
        let mut merged: Vec<TimeEdge> = Vec::with_capacity(list.len());
        for e in list {
            match merged.last_mut() {
                Some(last) if last.key() == e.key() => last.copies += e.copies,
                _ => merged.push(e),
            }
        }
        let mut incident = vec![Vec::new(); n];
        for (id, e) in merged.iter().enumerate() {
            incident[e.u].push(id);
            incident[e.v].push(id);
        }
        Ok(TemporalGraph { vertices, edges: merged, incident })
    }

    pub fn builder() -> TemporalGraphBuilder {
        TemporalGraphBuilder::default()
    }

    pub fn vertices(&self) -> &Vertices {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[TimeEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &TimeEdge {
        &self.edges[id]
    }

    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[v]
    }

    /// Looks up the record for an undirected key, in either orientation.
    pub fn find_edge(&self, u: Vertex, v: Vertex, tau: Time, d: Time) -> Option<EdgeId> {
        let key = (u.min(v), u.max(v), tau, d);
        self.edges.binary_search_by_key(&key, |e| e.key()).ok()
    }

    /// Maximum appearance time over all edges, 0 for an edgeless graph.
    pub fn lifespan(&self) -> Time {
        lifespan(self)
    }

    /// Largest arrival time `tau + d` over all edges.
    pub fn horizon(&self) -> Time {
        self.edges.iter().map(TimeEdge::arrival).max().unwrap_or(0)
    }

    /// Keeps the edges with `tau >= start` and, when `end` is set, `tau + d <= end`.
    pub fn restrict(&self, start: Time, end: Option<Time>) -> TemporalGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| e.tau >= start && end.is_none_or(|end| e.arrival() <= end))
            .copied();
        TemporalGraph::new(self.vertices.clone(), edges).expect("subgraph of a valid graph")
    }

    pub fn edge_label(&self, id: EdgeId) -> String {
        let e = &self.edges[id];
        format!(
            "({},{},{},{})",
            self.vertices.name(e.u),
            self.vertices.name(e.v),
            e.tau,
            e.d
        )
    }
}

pub fn lifespan(g: &TemporalGraph) -> Time {
    g.edges.iter().map(|e| e.tau).max().unwrap_or(0)
}

#[derive(Debug, Default)]
pub struct TemporalGraphBuilder {
    vertices: Vertices,
    edges: Vec<TimeEdge>,
    error: Option<Error>,
}

impl TemporalGraphBuilder {
    pub fn vertex(&mut self, name: &str) -> Vertex {
        match self.vertices.insert(name) {
            Ok(v) => v,
            Err(e) => {
                self.error.get_or_insert(e);
                0
            }
        }
    }

    pub fn edge(&mut self, u: &str, v: &str, tau: Time, d: Time, copies: u32) -> &mut Self {
        let (u, v) = (self.vertex(u), self.vertex(v));
        self.edges.push(TimeEdge::new(u, v, tau, d, copies));
        self
    }

    pub fn build(self) -> Result<TemporalGraph> {
        if let Some(e) = self.error {
            return Err(e);
        }
        TemporalGraph::new(self.vertices, self.edges)
    }
}

/// A weighted edge of a static multigraph. Weight 0 is allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StaticEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: u64,
    pub copies: u32,
}

impl StaticEdge {
    pub fn new(u: Vertex, v: Vertex, weight: u64, copies: u32) -> Self {
        StaticEdge { u, v, weight, copies }
    }

    pub fn key(&self) -> (Vertex, Vertex, u64) {
        (self.u, self.v, self.weight)
    }

    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticGraph {
    vertices: Vertices,
    edges: Vec<StaticEdge>,
    directed: bool,
    out: Vec<Vec<EdgeId>>,
    incident: Vec<Vec<EdgeId>>,
}

impl StaticGraph {
    pub fn new(
        vertices: Vertices,
        edges: impl IntoIterator<Item = StaticEdge>,
        directed: bool,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut list = Vec::new();
        for mut e in edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidEdge("endpoint out of range".into()));
            }
            if e.u == e.v {
                return Err(Error::InvalidEdge(format!("self-loop at `{}`", vertices.name(e.u))));
            }
            if e.copies == 0 {
                return Err(Error::InvalidEdge("copies must be at least 1".into()));
            }
            if !directed && e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
            list.push(e);
        }
        list.sort_by_key(|e| e.key());
        let mut merged: Vec<StaticEdge> = Vec::with_capacity(list.len());
        for e in list {
            match merged.last_mut() {
                Some(last) if last.key() == e.key() => last.copies += e.copies,
                _ => merged.push(e),
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (id, e) in merged.iter().enumerate() {
            out[e.u].push(id);
            if !directed {
                out[e.v].push(id);
            }
            incident[e.u].push(id);
            incident[e.v].push(id);
        }
        Ok(StaticGraph { vertices, edges: merged, directed, out, incident })
    }

    pub fn builder(directed: bool) -> StaticGraphBuilder {
        StaticGraphBuilder { directed, ..Default::default() }
    }

    pub fn vertices(&self) -> &Vertices {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[StaticEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &StaticEdge {
        &self.edges[id]
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges Traveller may leave `v` by: out-arcs when directed, all incident edges otherwise.
    pub fn out(&self, v: Vertex) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn edge_label(&self, id: EdgeId) -> String {
        let e = &self.edges[id];
        let sep = if self.directed { "->" } else { "-" };
        format!(
            "{}{}{}:{}",
            self.vertices.name(e.u),
            sep,
            self.vertices.name(e.v),
            e.weight
        )
    }
}

#[derive(Debug, Default)]
pub struct StaticGraphBuilder {
    vertices: Vertices,
    edges: Vec<StaticEdge>,
    directed: bool,
    error: Option<Error>,
}

impl StaticGraphBuilder {
    pub fn vertex(&mut self, name: &str) -> Vertex {
        match self.vertices.insert(name) {
            Ok(v) => v,
            Err(e) => {
                self.error.get_or_insert(e);
                0
            }
        }
    }

    pub fn edge(&mut self, u: &str, v: &str, weight: u64, copies: u32) -> &mut Self {
        let (u, v) = (self.vertex(u), self.vertex(v));
        self.edges.push(StaticEdge::new(u, v, weight, copies));
        self
    }

    pub fn build(self) -> Result<StaticGraph> {
        if let Some(e) = self.error {
            return Err(e);
        }
        StaticGraph::new(self.vertices, self.edges, self.directed)
    }
}
