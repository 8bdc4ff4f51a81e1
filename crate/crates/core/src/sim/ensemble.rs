//! Seeded ensemble execution with per-replicate summaries and empirical
//! statistics.
//!
//! Replicate `i` always draws its seed from `(master_seed, i)` through the
//! splitmix64 mixing in [`crate::rng`], and results are gathered in
//! replicate order, so output is bit-identical no matter how many workers
//! rayon decides to use.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ControlParams, FixedRateParams, GeneralParams};
use crate::rng::child_seed;
use crate::sim::{
    simulate_control, simulate_fixed_rate, simulate_fully_cooperative, simulate_general,
    StateSample, TerminalReason, Trajectory,
};

/// Which CTMC an ensemble runs.
#[derive(Debug, Clone)]
pub enum Model {
    General(GeneralParams),
    FullyCooperative(GeneralParams),
    FixedRate(FixedRateParams),
    Control(ControlParams),
}

/// Summary of one replicate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed: u64,
    /// Terminal time of the path (absorption time, or the horizon when the
    /// time limit was hit first).
    pub extinction_time: f64,
    pub final_xc: u32,
    pub final_xf: u32,
    pub max_y: u32,
    pub peak_time: f64,
}

/// Per-replicate records of an ensemble, in replicate order.
#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub records: Vec<ReplicateRecord>,
}

impl EnsembleResult {
    pub fn replicates(&self) -> usize {
        self.records.len()
    }

    pub fn extinction_times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.extinction_time).collect()
    }

    /// Mean and standard error of a per-replicate statistic.
    pub fn mean_se(&self, f: impl Fn(&ReplicateRecord) -> f64) -> (f64, f64) {
        let n = self.records.len() as f64;
        let mean = self.records.iter().map(&f).sum::<f64>() / n;
        let var = self
            .records
            .iter()
            .map(|r| {
                let d = f(r) - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1.0).max(1.0);
        (mean, (var / n).sqrt())
    }

    /// Serialize as CSV, one row per replicate.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("replicate,seed,extinction_time,final_xc,final_xf,max_y,peak_time\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.replicate, r.seed, r.extinction_time, r.final_xc, r.final_xf, r.max_y, r.peak_time
            ));
        }
        out
    }
}

fn summarize<S: StateSample>(
    replicate: usize,
    traj: &Trajectory<S>,
    t_max: f64,
    finals: (u32, u32),
) -> ReplicateRecord {
    let mut max_y = 0;
    let mut peak_time = 0.0;
    for e in &traj.events {
        if e.holders() > max_y {
            max_y = e.holders();
            peak_time = e.time();
        }
    }
    let extinction_time = if traj.terminal_reason == TerminalReason::TimeLimit {
        t_max
    } else {
        traj.final_time()
    };
    ReplicateRecord {
        replicate,
        seed: traj.seed,
        extinction_time,
        final_xc: finals.0,
        final_xf: finals.1,
        max_y,
        peak_time,
    }
}

fn run_one(model: &Model, replicate: usize, seed: u64, t_max: f64) -> ReplicateRecord {
    match model {
        Model::General(p) => {
            let traj = simulate_general(p, seed, t_max);
            let last = traj.events.last().unwrap();
            summarize(replicate, &traj, t_max, (last.xc, last.xf))
        }
        Model::FullyCooperative(p) => {
            let traj = simulate_fully_cooperative(p, seed).expect("validated params");
            let last = traj.events.last().unwrap();
            summarize(replicate, &traj, t_max, (last.xc, 0))
        }
        Model::FixedRate(p) => {
            let traj = simulate_fixed_rate(p, seed, t_max);
            let last = traj.events.last().unwrap();
            summarize(replicate, &traj, t_max, (last.x, 0))
        }
        Model::Control(p) => {
            let traj = simulate_control(p, seed, t_max);
            let last = traj.events.last().unwrap();
            summarize(replicate, &traj, t_max, (last.x, 0))
        }
    }
}

/// Run `replicates` independent sample paths with deterministically derived
/// child seeds.
pub fn run_ensemble(
    model: &Model,
    master_seed: u64,
    replicates: usize,
    t_max: f64,
) -> EnsembleResult {
    let records = (0..replicates)
        .into_par_iter()
        .map(|i| run_one(model, i, child_seed(master_seed, i as u64), t_max))
        .collect();
    EnsembleResult { records }
}

/// Mean and standard error of a time-indexed statistic over an ensemble.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct YStat {
    pub t: f64,
    pub mean: f64,
    pub std_err: f64,
}

fn grid_stats(per_rep: Vec<Vec<f64>>, grid: &[f64]) -> Vec<YStat> {
    let n = per_rep.len() as f64;
    grid.iter()
        .enumerate()
        .map(|(j, &t)| {
            let mean = per_rep.iter().map(|v| v[j]).sum::<f64>() / n;
            let var = per_rep
                .iter()
                .map(|v| {
                    let d = v[j] - mean;
                    d * d
                })
                .sum::<f64>()
                / (n - 1.0).max(1.0);
            YStat { t, mean, std_err: (var / n).sqrt() }
        })
        .collect()
}

/// Ensemble mean of Y(t) on a time grid.
pub fn mean_y_on_grid(
    model: &Model,
    master_seed: u64,
    replicates: usize,
    t_max: f64,
    grid: &[f64],
) -> Vec<YStat> {
    let per_rep: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let seed = child_seed(master_seed, i as u64);
            match model {
                Model::General(p) => {
                    let traj = simulate_general(p, seed, t_max);
                    grid.iter().map(|&t| traj.state_at(t).y as f64).collect()
                }
                Model::FullyCooperative(p) => {
                    let traj = simulate_fully_cooperative(p, seed).expect("validated params");
                    grid.iter().map(|&t| traj.state_at(t).y as f64).collect()
                }
                Model::FixedRate(p) => {
                    let traj = simulate_fixed_rate(p, seed, t_max);
                    grid.iter().map(|&t| traj.state_at(t).y as f64).collect()
                }
                Model::Control(p) => {
                    let traj = simulate_control(p, seed, t_max);
                    grid.iter().map(|&t| traj.state_at(t).y as f64).collect()
                }
            }
        })
        .collect();
    grid_stats(per_rep, grid)
}

/// Ensemble mean of the fraction of initially file-less peers served by
/// time t (the empirical acquisition CDF of a tagged peer).
pub fn served_fraction_on_grid(
    model: &Model,
    master_seed: u64,
    replicates: usize,
    t_max: f64,
    grid: &[f64],
) -> Vec<YStat> {
    let per_rep: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let seed = child_seed(master_seed, i as u64);
            match model {
                Model::General(p) => {
                    let x_init = (p.nc() + p.nf()) as f64;
                    let traj = simulate_general(p, seed, t_max);
                    grid.iter()
                        .map(|&t| {
                            let s = traj.state_at(t);
                            (x_init - (s.xc + s.xf) as f64) / x_init
                        })
                        .collect()
                }
                Model::FullyCooperative(p) => {
                    let x_init = p.nc() as f64;
                    let traj = simulate_fully_cooperative(p, seed).expect("validated params");
                    grid.iter()
                        .map(|&t| (x_init - traj.state_at(t).xc as f64) / x_init)
                        .collect()
                }
                Model::FixedRate(p) => {
                    let x_init = (p.n_total() - p.y0()) as f64;
                    let traj = simulate_fixed_rate(p, seed, t_max);
                    grid.iter()
                        .map(|&t| (x_init - traj.state_at(t).x as f64) / x_init)
                        .collect()
                }
                Model::Control(p) => {
                    let traj = simulate_control(p, seed, t_max);
                    let x_init = traj.events[0].x as f64;
                    grid.iter()
                        .map(|&t| (x_init - traj.state_at(t).x as f64) / x_init)
                        .collect()
                }
            }
        })
        .collect();
    grid_stats(per_rep, grid)
}

/// Right-continuous empirical distribution function of a sample set.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        samples.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
        Ok(Self { sorted: samples })
    }

    /// F(x) = (#samples <= x) / n.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= x);
        count as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest |F(t) - g(t)| over a grid.
    pub fn sup_distance_on_grid(&self, g: impl Fn(f64) -> f64, grid: &[f64]) -> f64 {
        grid.iter()
            .map(|&t| (self.eval(t) - g(t)).abs())
            .fold(0.0, f64::max)
    }
}
