//! One preset per source figure. Parameters the figures leave unstated are
//! filled in here and flagged `implementer_choice` in the sidecar.

use std::path::PathBuf;

use anyhow::{bail, Result};
use serde_json::json;

use crate::config::{ExperimentConfig, ExperimentKind, GridSpec};

pub const FIGURE_IDS: &[&str] = &["1", "1bis", "3", "4", "5", "6", "7", "8", "9"];

/// Build the preset config for a figure. Returns the config, the output
/// file stem, and the implementer-choice notes for the sidecar.
pub fn preset(fig_id: &str, out: PathBuf, seed: u64) -> Result<(ExperimentConfig, String, Vec<String>)> {
    let (kind, replicates, grid, params, notes): (_, usize, GridSpec, _, Vec<&str>) = match fig_id {
        "1" => (
            ExperimentKind::PhaseSweep,
            1,
            GridSpec::default(),
            json!({
                "y0": 0.05,
                "xc0_values": [0.01, 0.1, 0.3, 0.5, 0.9],
                "mu": 1.0,
                "theta_xc0": {"min": 0.1, "max": 100.0, "points": 41, "log": true},
            }),
            vec![],
        ),
        "1bis" => (
            ExperimentKind::FixedRateSweep,
            1,
            GridSpec::default(),
            json!({
                "x0_values": [0.95, 0.8],
                "mu": 1.0,
                "xi": {"min": 0.05, "max": 5.0, "points": 100, "log": false},
            }),
            vec![],
        ),
        "3" | "4" => (
            ExperimentKind::ExtinctionCdf,
            1000,
            GridSpec { t_max: 25.0, points: 251 },
            json!({
                "n_total": 400,
                "lambda": 0.006,
                "y0": if fig_id == "3" { 1 } else { 3 },
                "variants": [
                    {"label": "r1", "r": 1.0, "mu": 1.0},
                    {"label": "r06", "r": 0.6, "mu": 1.0},
                ],
                "include_branching": true,
            }),
            vec![],
        ),
        "5" | "6" => (
            ExperimentKind::ExtinctionCdf,
            1000,
            GridSpec { t_max: 50.0, points: 251 },
            json!({
                "n_total": 400,
                "lambda": 0.0025,
                "y0": if fig_id == "5" { 1 } else { 3 },
                "variants": [
                    {"label": "mu05", "r": 1.0, "mu": 0.5},
                    {"label": "mu1", "r": 1.0, "mu": 1.0},
                ],
                "include_branching": false,
            }),
            vec![
                "mu values {0.5, 1.0}: the source legend is not enumerated",
                "r = 1.0: the source does not state the cooperative share",
            ],
        ),
        "7" => (
            ExperimentKind::TerminalFraction,
            500,
            GridSpec::default(),
            json!({
                "n_total": 300,
                "y0": 10,
                "sweep": "lambda",
                "values": [0.0015, 0.0022, 0.0032, 0.0046, 0.0068, 0.01, 0.0147, 0.0215],
                "mu": 1.0,
                "r_values": [1.0, 0.5],
            }),
            vec![
                "lambda grid: the source does not state its sweep values",
                "mu = 1.0: the source does not state mu for this sweep",
            ],
        ),
        "8" => (
            ExperimentKind::TerminalFraction,
            500,
            GridSpec::default(),
            json!({
                "n_total": 300,
                "y0": 10,
                "sweep": "mu",
                "values": [0.4, 0.6, 0.9, 1.35, 2.0, 3.0],
                "lambda": 0.01,
                "r_values": [1.0, 0.5],
            }),
            vec![
                "mu grid: the source does not state its sweep values",
                "lambda = 0.01: the source does not state lambda for this sweep",
            ],
        ),
        "9" => (
            ExperimentKind::ControlUtility,
            1,
            GridSpec::default(),
            json!({
                "n_total": 500,
                "y_star_count": 2,
                "y0": 0.0,
                "pairs": [
                    {"beta": 2.0, "mu": 1.0},
                    {"beta": 3.0, "mu": 1.0},
                ],
                "alpha": {"min": 0.0, "max": 14.0, "points": 57},
            }),
            vec!["(beta, mu) pairs: the source states two pairs were used but not their values"],
        ),
        other => bail!("unknown figure id `{other}` (known: {})", FIGURE_IDS.join(", ")),
    };
    let cfg = ExperimentConfig {
        kind,
        seed,
        replicates,
        out,
        grid,
        params,
    };
    let stem = format!("fig{fig_id}");
    Ok((cfg, stem, notes.into_iter().map(String::from).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ids_resolve() {
        for id in FIGURE_IDS {
            let (cfg, stem, _) = preset(id, PathBuf::from("out"), 1).unwrap();
            assert_eq!(stem, format!("fig{id}"));
            assert!(cfg.replicates >= 1);
        }
        assert!(preset("2", PathBuf::from("out"), 1).is_err());
    }
}
