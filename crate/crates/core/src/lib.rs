//! Canadian Traveller games on temporal and static graphs.

pub mod arena;
pub mod cost;
pub mod dagctp;
pub mod error;
pub mod expansion;
pub mod gadgets;
pub mod graph;
pub mod instance;
pub mod litctp;
pub mod random;
pub mod staticctp;
pub mod utctp;
pub mod walk;

pub use cost::Cost;
pub use error::{Error, Result};
pub use graph::{EdgeId, EdgeStatus, StaticEdge, StaticGraph, TemporalGraph, Time, TimeEdge, Vertex, Vertices};
pub use instance::{parse_instance, serialize_instance, serialize_instance_json, Graph, Instance};
pub use walk::{validate_walk, TemporalWalk, WalkCheck, WalkStep};
