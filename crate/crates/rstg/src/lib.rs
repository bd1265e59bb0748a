//! Random simple temporal graphs: samplers, foremost-tree reachability,
//! temporal connected components, closed-form threshold quantities, and a
//! Monte Carlo experiment harness.
//!
//! A temporal graph assigns each edge of a simple graph one presence time in
//! `[0, 1]`; a temporal path must traverse edges with strictly increasing
//! times. Reachability under this rule is neither symmetric nor transitive,
//! which makes connectivity and "connected components" behave very
//! differently from the static setting. This crate samples such graphs where
//! the times are uniform (keeping edges with time at most a budget `p`),
//! grows earliest-arrival forests, estimates the largest open/closed
//! temporally connected sets, and measures where the connectivity thresholds
//! sit as `p` scales against `log n / n`.

pub mod bitset;
pub mod components;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod models;
pub mod reach;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{
    InducedSubgraph, TemporalEdge, TemporalGraph, TemporalPath, TimeLabel, TimeWindow, VertexId,
};
pub use models::{BaseGraph, ModelParams, RngStream};
