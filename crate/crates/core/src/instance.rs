//! Instances and their on-disk formats.
//!
//! Two encodings are accepted by [`parse_instance`]. The line format:
//!
//! ```text
//! # comment
//! model temporal
//! vertices s a t
//! source s
//! target t
//! k 1
//! deadline 9
//! edge s a 0 1 2
//! edge a t 1 1 2
//! ```
//!
//! `model` is `temporal`, `static` or `dag`. Temporal edges are `u v tau d copies`,
//! static and dag edges are `u v weight copies`. A `deadline` line is optional, and
//! vertices not listed in `vertices` are added in order of first appearance.
//! Input starting with `{` is read as JSON with the same fields (see
//! `docs/instance.schema.json`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{StaticEdge, StaticGraph, TemporalGraph, Time, TimeEdge, Vertex, Vertices};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Graph {
    Temporal(TemporalGraph),
    Static(StaticGraph),
}

impl Graph {
    pub fn vertices(&self) -> &Vertices {
        match self {
            Graph::Temporal(g) => g.vertices(),
            Graph::Static(g) => g.vertices(),
        }
    }

    pub fn model(&self) -> &'static str {
        match self {
            Graph::Temporal(_) => "temporal",
            Graph::Static(g) if g.is_directed() => "dag",
            Graph::Static(_) => "static",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub source: Vertex,
    pub target: Vertex,
    pub k: u32,
    pub deadline: Option<Time>,
}

impl Instance {
    pub fn temporal(g: TemporalGraph, s: &str, t: &str, k: u32) -> Result<Self> {
        let source = g.vertices().id(s).ok_or_else(|| Error::UnknownSource(s.into()))?;
        let target = g.vertices().id(t).ok_or_else(|| Error::UnknownTarget(t.into()))?;
        Ok(Instance { graph: Graph::Temporal(g), source, target, k, deadline: None })
    }

    pub fn from_static(g: StaticGraph, s: &str, t: &str, k: u32) -> Result<Self> {
        let source = g.vertices().id(s).ok_or_else(|| Error::UnknownSource(s.into()))?;
        let target = g.vertices().id(t).ok_or_else(|| Error::UnknownTarget(t.into()))?;
        Ok(Instance { graph: Graph::Static(g), source, target, k, deadline: None })
    }

    pub fn with_deadline(mut self, deadline: Option<Time>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn temporal_graph(&self) -> Result<&TemporalGraph> {
        match &self.graph {
            Graph::Temporal(g) => Ok(g),
            other => Err(Error::WrongModel { expected: "temporal", found: other.model() }),
        }
    }

    pub fn static_graph(&self) -> Result<&StaticGraph> {
        match &self.graph {
            Graph::Static(g) => Ok(g),
            other => Err(Error::WrongModel { expected: "static", found: other.model() }),
        }
    }

    pub fn vertices(&self) -> &Vertices {
        self.graph.vertices()
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        self.vertices().name(v)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    u: String,
    v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<Time>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<Time>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<u64>,
    #[serde(default = "one")]
    copies: u32,
}

fn one() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInstance {
    model: String,
    #[serde(default)]
    vertices: Vec<String>,
    source: String,
    target: String,
    k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deadline: Option<Time>,
    edges: Vec<JsonEdge>,
}

enum RawEdges {
    Temporal(Vec<(String, String, Time, Time, u32)>),
    Static(Vec<(String, String, u64, u32)>),
}

struct Raw {
    model: String,
    vertices: Vec<String>,
    source: String,
    target: String,
    k: u32,
    deadline: Option<Time>,
    edges: RawEdges,
}

fn build(raw: Raw) -> Result<Instance> {
    let mut vertices = Vertices::from_names(raw.vertices.iter().cloned())?;
    let source = vertices.id(&raw.source).ok_or(Error::UnknownSource(raw.source))?;
    let target = vertices.id(&raw.target).ok_or(Error::UnknownTarget(raw.target))?;
    let graph = match raw.edges {
        RawEdges::Temporal(list) => {
            let mut edges = Vec::with_capacity(list.len());
            for (u, v, tau, d, copies) in list {
                let (u, v) = (vertices.insert(&u)?, vertices.insert(&v)?);
                edges.push(TimeEdge::new(u, v, tau, d, copies));
            }
            Graph::Temporal(TemporalGraph::new(vertices, edges)?)
        }
        RawEdges::Static(list) => {
            let mut edges = Vec::with_capacity(list.len());
            for (u, v, weight, copies) in list {
                let (u, v) = (vertices.insert(&u)?, vertices.insert(&v)?);
                edges.push(StaticEdge::new(u, v, weight, copies));
            }
            Graph::Static(StaticGraph::new(vertices, edges, raw.model == "dag")?)
        }
    };
    Ok(Instance { graph, source, target, k: raw.k, deadline: raw.deadline })
}

fn parse_json(text: &str) -> Result<Instance> {
    let j: JsonInstance = serde_json::from_str(text)?;
    let edges = match j.model.as_str() {
        "temporal" => {
            let mut list = Vec::new();
            for (i, e) in j.edges.into_iter().enumerate() {
                match (e.tau, e.d) {
                    (Some(tau), Some(d)) => list.push((e.u, e.v, tau, d, e.copies)),
                    _ => return Err(Error::InvalidEdge(format!("edge {i}: temporal edges need tau and d"))),
                }
            }
            RawEdges::Temporal(list)
        }
        "static" | "dag" => {
            let mut list = Vec::new();
            for (i, e) in j.edges.into_iter().enumerate() {
                match e.weight {
                    Some(w) => list.push((e.u, e.v, w, e.copies)),
                    None => return Err(Error::InvalidEdge(format!("edge {i}: static edges need weight"))),
                }
            }
            RawEdges::Static(list)
        }
        other => return Err(Error::InvalidArgument(format!("unknown model `{other}`"))),
    };
    build(Raw {
        model: j.model,
        vertices: j.vertices,
        source: j.source,
        target: j.target,
        k: j.k,
        deadline: j.deadline,
        edges,
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, field: &str, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{field}: expected a nonnegative integer, found `{tok}`"),
    })
}

fn parse_lines(text: &str) -> Result<Instance> {
    let mut model: Option<String> = None;
    let mut vertices = Vec::new();
    let mut source = None;
    let mut target = None;
    let mut k = None;
    let mut deadline = None;
    let mut temporal = Vec::new();
    let mut fixed = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        let single = |name: &str| -> Result<&str> {
            if toks.len() != 2 {
                return Err(err(format!("`{name}` takes exactly one value")));
            }
            Ok(toks[1])
        };
        match toks[0] {
            "model" => {
                let m = single("model")?;
                if !matches!(m, "temporal" | "static" | "dag") {
                    return Err(err(format!("unknown model `{m}`")));
                }
                model = Some(m.to_string());
            }
            "vertices" => vertices.extend(toks[1..].iter().map(|s| s.to_string())),
            "source" => source = Some(single("source")?.to_string()),
            "target" => target = Some(single("target")?.to_string()),
            "k" => k = Some(parse_num(line, "k", single("k")?)?),
            "deadline" => deadline = Some(parse_num(line, "deadline", single("deadline")?)?),
            "edge" => {
                let m = model
                    .as_deref()
                    .ok_or_else(|| err("`model` must precede edges".into()))?;
                let args = &toks[1..];
                if m == "temporal" {
                    if args.len() != 5 {
                        return Err(err("temporal edge needs `u v tau d copies`".into()));
                    }
                    temporal.push((
                        args[0].to_string(),
                        args[1].to_string(),
                        parse_num(line, "tau", args[2])?,
                        parse_num(line, "d", args[3])?,
                        parse_num(line, "copies", args[4])?,
                    ));
                } else {
                    if args.len() != 4 {
                        return Err(err("static edge needs `u v weight copies`".into()));
                    }
                    fixed.push((
                        args[0].to_string(),
                        args[1].to_string(),
                        parse_num(line, "weight", args[2])?,
                        parse_num(line, "copies", args[3])?,
                    ));
                }
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let missing = |what: &str| Error::Parse { line: last_line, message: format!("missing `{what}`") };
    let model = model.ok_or_else(|| missing("model"))?;
    let edges = if model == "temporal" {
        RawEdges::Temporal(temporal)
    } else {
        RawEdges::Static(fixed)
    };
    build(Raw {
        model,
        vertices,
        source: source.ok_or_else(|| missing("source"))?,
        target: target.ok_or_else(|| missing("target"))?,
        k: k.ok_or_else(|| missing("k"))?,
        deadline,
        edges,
    })
}

/// Parses either encoding; JSON is detected by a leading `{`.
pub fn parse_instance(text: &str) -> Result<Instance> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_lines(text)
    }
}

/// Line-format output. Edges appear in canonical order, so the result is byte-stable.
pub fn serialize_instance(inst: &Instance) -> String {
    let vs = inst.vertices();
    let mut out = String::new();
    out.push_str(&format!("model {}\n", inst.graph.model()));
    out.push_str("vertices");
    for name in vs.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    out.push_str(&format!("source {}\n", vs.name(inst.source)));
    out.push_str(&format!("target {}\n", vs.name(inst.target)));
    out.push_str(&format!("k {}\n", inst.k));
    if let Some(t) = inst.deadline {
        out.push_str(&format!("deadline {t}\n"));
    }
    match &inst.graph {
        Graph::Temporal(g) => {
            for e in g.edges() {
                out.push_str(&format!(
                    "edge {} {} {} {} {}\n",
                    vs.name(e.u),
                    vs.name(e.v),
                    e.tau,
                    e.d,
                    e.copies
                ));
            }
        }
        Graph::Static(g) => {
            for e in g.edges() {
                out.push_str(&format!(
                    "edge {} {} {} {}\n",
                    vs.name(e.u),
                    vs.name(e.v),
                    e.weight,
                    e.copies
                ));
            }
        }
    }
    out
}

pub fn serialize_instance_json(inst: &Instance) -> String {
    let vs = inst.vertices();
    let edges = match &inst.graph {
        Graph::Temporal(g) => g
            .edges()
            .iter()
            .map(|e| JsonEdge {
                u: vs.name(e.u).into(),
                v: vs.name(e.v).into(),
                tau: Some(e.tau),
                d: Some(e.d),
                weight: None,
                copies: e.copies,
            })
            .collect(),
        Graph::Static(g) => g
            .edges()
            .iter()
            .map(|e| JsonEdge {
                u: vs.name(e.u).into(),
                v: vs.name(e.v).into(),
                tau: None,
                d: None,
                weight: Some(e.weight),
                copies: e.copies,
            })
            .collect(),
    };
    let j = JsonInstance {
        model: inst.graph.model().into(),
        vertices: vs.names().to_vec(),
        source: vs.name(inst.source).into(),
        target: vs.name(inst.target).into(),
        k: inst.k,
        deadline: inst.deadline,
        edges,
    };
    serde_json::to_string_pretty(&j).expect("instance serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_ROUTES: &str = "\
model temporal
vertices s v0 v1 v2 t
source s
target t
k 2
edge s v0 0 1 3
edge v0 v1 1 1 3
edge v0 v2 2 1 1
edge v1 t 2 1 2
edge v2 t 3 1 3
";

    #[test]
    fn parses_line_format() {
        let inst = parse_instance(TWO_ROUTES).unwrap();
        assert_eq!(inst.vertices().len(), 5);
        assert_eq!(inst.temporal_graph().unwrap().edges().len(), 5);
        assert_eq!(inst.k, 2);
        assert_eq!(inst.deadline, None);
    }

    #[test]
    fn unknown_source_is_reported() {
        let text = TWO_ROUTES.replace("source s", "source q");
        let err = parse_instance(&text).unwrap_err();
        assert!(err.to_string().contains("unknown source vertex"));
    }

    #[test]
    fn duplicate_records_merge() {
        let text = "model temporal\nsource a\ntarget b\nvertices a b\nk 1\nedge a b 0 1 2\nedge b a 0 1 3\n";
        let inst = parse_instance(text).unwrap();
        let g = inst.temporal_graph().unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].copies, 5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "model temporal\nvertices a b\nsource a\ntarget b\nk 1\nedge a b x 1 1\n";
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trips_both_encodings() {
        let inst = parse_instance(TWO_ROUTES).unwrap().with_deadline(Some(4));
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
        let json = serialize_instance_json(&inst);
        assert_eq!(parse_instance(&json).unwrap(), inst);
    }

    #[test]
    fn static_and_dag_models() {
        let text = "model dag\nvertices s t\nsource s\ntarget t\nk 0\nedge t s 1 1\nedge s t 0 2\n";
        let inst = parse_instance(text).unwrap();
        let g = inst.static_graph().unwrap();
        assert!(g.is_directed());
        assert_eq!(g.edges().len(), 2);
        assert!(inst.temporal_graph().is_err());
        let again = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(again, inst);
    }
}
