//! Exact stochastic simulation of the swarm CTMCs: single trajectories,
//! seeded ensembles, empirical statistics, the hybrid branching-to-fluid
//! scheme, and an exact small-population oracle.

mod ensemble;
mod exact;
mod gillespie;
mod hybrid;

pub use ensemble::{
    mean_y_on_grid, run_ensemble, served_fraction_on_grid, EmpiricalCdf, EnsembleResult, Model,
    ReplicateRecord, YStat,
};
pub use exact::{exact_small_n, ExactTransient, TerminalOutcome};
pub use gillespie::{
    default_t_max, simulate_control, simulate_fixed_rate, simulate_fully_cooperative,
    simulate_general,
};
pub(crate) use gillespie::branching_walk;
pub use hybrid::{simulate_hybrid, HybridOutcome};

use serde::Serialize;

use crate::model::{FixedRateState, GeneralState};

/// Why a sample path stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalReason {
    /// The file disappeared: no peer holds a copy.
    AbsorbedYZero,
    /// Every peer that could be served has been served.
    AllServed,
    /// The time horizon was reached first.
    TimeLimit,
}

/// A state snapshot on a sample path.
pub trait StateSample: Copy {
    fn time(&self) -> f64;
    fn holders(&self) -> u32;
    fn csv_header() -> &'static str;
    fn csv_row(&self) -> String;
}

impl StateSample for GeneralState {
    fn time(&self) -> f64 {
        self.t
    }
    fn holders(&self) -> u32 {
        self.y
    }
    fn csv_header() -> &'static str {
        "t,y,xc,xf"
    }
    fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.t, self.y, self.xc, self.xf)
    }
}

impl StateSample for FixedRateState {
    fn time(&self) -> f64 {
        self.t
    }
    fn holders(&self) -> u32 {
        self.y
    }
    fn csv_header() -> &'static str {
        "t,y,x"
    }
    fn csv_row(&self) -> String {
        format!("{},{},{}", self.t, self.y, self.x)
    }
}

/// One seeded sample path: the initial state followed by one snapshot per
/// transition, at strictly increasing times.
#[derive(Debug, Clone)]
pub struct Trajectory<S: StateSample> {
    pub seed: u64,
    pub events: Vec<S>,
    pub terminal_reason: TerminalReason,
}

impl<S: StateSample> Trajectory<S> {
    /// State in effect at time `t` (right-continuous step function).
    pub fn state_at(&self, t: f64) -> &S {
        let idx = self.events.partition_point(|s| s.time() <= t);
        &self.events[idx.saturating_sub(1)]
    }

    /// Time of the last transition.
    pub fn final_time(&self) -> f64 {
        self.events.last().map(|s| s.time()).unwrap_or(0.0)
    }

    /// Serialize the path as CSV, one row per event.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(S::csv_header());
        out.push('\n');
        for e in &self.events {
            out.push_str(&e.csv_row());
            out.push('\n');
        }
        out
    }
}
