//! The locally informed temporal game: on first arriving at a vertex,
//! Traveller learns the status of every edge incident to it.

mod exact;
mod k1;

pub use crate::graph::EdgeStatus;
pub use exact::{exact_li, LiInfoState, LiOptions, LiOutcome, LiSolver};
pub use k1::{compute_mu, latest_departures, solve_k1, LatestTime, Pi1Table};
