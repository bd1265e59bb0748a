//! Monte Carlo harness: seeded, parallel, deterministically aggregated
//! experiment drivers over the random temporal graph models, plus a
//! self-test that cross-validates the reachability engines.
//!
//! Every driver takes a master seed and derives one independent RNG stream
//! per trial, so output is identical regardless of thread count.

mod protocol;
mod selftest;
mod studies;
mod sweep;

pub use protocol::{run_phase_protocol, run_phase_protocol_sampled, PhaseRecord};
pub use selftest::{run_oracle_selftest, SelftestReport};
pub use studies::{
    run_added_vertex_uniformity, run_target_set_study, run_threshold_ladder,
    run_waiting_time_study, LadderResult, UniformityBase, UniformityResult, WaitingTimeSummary,
};
pub use sweep::{run_sweep, write_sweep_csv, SweepOutput};

use serde::Serialize;

use crate::error::{Error, Result};

/// How a sweep trial splits its label budget `p` into sub-intervals for the
/// interval-intersection measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowProtocol {
    /// No split; the intersection-set column is reported as 0.
    Whole,
    /// Boundaries at p/3 and 2p/3.
    Thirds,
    /// Boundaries at p/5 and 4p/5.
    Fifths,
}

impl std::str::FromStr for WindowProtocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whole" => Ok(WindowProtocol::Whole),
            "thirds" => Ok(WindowProtocol::Thirds),
            "fifths" => Ok(WindowProtocol::Fifths),
            other => Err(Error::domain(format!("unknown window protocol {other:?}"))),
        }
    }
}

/// Which component computations a sweep performs per trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentMethod {
    /// Open-component bounds only; the closed lower bound column is the
    /// trivial 1.
    Bounds,
    /// Open bounds plus the closed-component peel (costlier: the peel
    /// re-runs reachability once per removed vertex).
    BoundsAndPeel,
}

impl std::str::FromStr for ComponentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounds" => Ok(ComponentMethod::Bounds),
            "bounds+peel" | "peel" => Ok(ComponentMethod::BoundsAndPeel),
            other => Err(Error::domain(format!("unknown component method {other:?}"))),
        }
    }
}

/// Grid configuration for a sweep: every (n, c, trial) triple is one work
/// item with label budget p = c log n / n (clamped to 1).
#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub c_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub window_protocol: WindowProtocol,
    pub component_method: ComponentMethod,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.c_grid.is_empty() {
            return Err(Error::domain("sweep grid must be nonempty"));
        }
        if self.trials < 1 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(Error::domain(format!("sweep needs n >= 2, got {n}")));
        }
        if let Some(&c) = self.c_grid.iter().find(|&&c| !(c >= 0.0) || !c.is_finite()) {
            return Err(Error::domain(format!("c values must be finite and >= 0, got {c}")));
        }
        Ok(())
    }
}

/// One sweep measurement.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trial_index: usize,
    /// RNG stream index used for this trial under the master seed.
    pub seed: u64,
    pub largest_open_lower: usize,
    pub largest_open_upper: usize,
    pub largest_closed_lower: usize,
    /// Vertex 0 reaches vertex 1.
    pub pair_reached: bool,
    /// Number of vertices reaching everything.
    pub source_count: usize,
    pub is_tc: bool,
    /// |X ∩ Y| under the interval protocol; 0 for `Whole`.
    pub z_set_size: usize,
}
