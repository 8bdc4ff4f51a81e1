//! Hybrid regime switch: simulate the branching chain while the torrent is
//! small, then hand a surviving run over to the fluid limit.
//!
//! Phase one runs the linear birth-death chain (births at rate
//! lambda N_c y, deaths at rate mu y) until the torrent dies or reaches the
//! switch threshold n0. A surviving run re-enters the mean-field system at
//! (n0/N, xc/N, xf/N), where xc discounts the cooperative peers served
//! during takeoff.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::meanfield;
use crate::model::GeneralParams;
use crate::rng::rng_for;
use crate::sim::branching_walk;

/// Outcome of a hybrid run. Both variants end with the file extinct; they
/// differ in whether dissemination took off first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HybridOutcome {
    /// The torrent died in the branching phase.
    EarlyExtinction { time: f64 },
    /// The torrent reached the switch threshold; the fluid limit carries it
    /// to the reported terminal uninfected fractions.
    LateExtinction {
        switch_time: f64,
        xc_inf: f64,
        xf_inf: f64,
    },
}

impl HybridOutcome {
    pub fn took_off(&self) -> bool {
        matches!(self, HybridOutcome::LateExtinction { .. })
    }
}

/// Run the branching phase until extinction or y = n0, then report the
/// mean-field terminal fractions for surviving runs.
pub fn simulate_hybrid(p: &GeneralParams, seed: u64, n0: u32) -> Result<HybridOutcome> {
    if n0 <= p.y0() || n0 >= p.n_total() {
        return Err(Error::InvalidThreshold(n0));
    }
    let theta = p.theta()?;
    let mut rng = rng_for(seed, 0);
    let (time, y, births) = branching_walk(
        p.lambda() * p.nc() as f64,
        p.mu(),
        p.y0(),
        n0,
        &mut rng,
    );
    if y == 0 {
        return Ok(HybridOutcome::EarlyExtinction { time });
    }

    let n = p.n_total() as f64;
    let y_sw = n0 as f64 / n;
    let xc_sw = (p.nc() as u64).saturating_sub(births) as f64 / n;
    let xf_sw = p.nf() as f64 / n;

    if xc_sw <= 0.0 {
        // Cooperative pool exhausted during takeoff: y only decays, and the
        // free riders see the integrated torrent beta y_sw / mu.
        return Ok(HybridOutcome::LateExtinction {
            switch_time: time,
            xc_inf: 0.0,
            xf_inf: xf_sw * (-theta * y_sw).exp(),
        });
    }
    let xc_inf = meanfield::xc_limit(theta, y_sw, xc_sw)?;
    let xf_inf = xf_sw * xc_inf / xc_sw;
    Ok(HybridOutcome::LateExtinction { switch_time: time, xc_inf, xf_inf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_thresholds() {
        let p = GeneralParams::new(400, 0.006, 1.0, 3, 397, 0).unwrap();
        assert!(matches!(
            simulate_hybrid(&p, 0, 3),
            Err(Error::InvalidThreshold(3))
        ));
        assert!(matches!(
            simulate_hybrid(&p, 0, 400),
            Err(Error::InvalidThreshold(400))
        ));
        assert!(simulate_hybrid(&p, 0, 30).is_ok());
    }

    #[test]
    fn subcritical_runs_die_early() {
        // rho = 0.8: takeoff to n0 = 30 has probability ~3e-4 per run.
        let p = GeneralParams::new(400, 0.8 / 399.0, 1.0, 1, 399, 0).unwrap();
        for seed in 0..200 {
            match simulate_hybrid(&p, seed, 30).unwrap() {
                HybridOutcome::EarlyExtinction { time } => assert!(time > 0.0),
                other => panic!("unexpected takeoff at seed {seed}: {other:?}"),
            }
        }
    }

    #[test]
    fn takeoff_fraction_matches_branching_survival() {
        // rho = 2.394: P(takeoff) ~ 1 - 1/rho^{y0}.
        let p = GeneralParams::new(400, 0.006, 1.0, 1, 399, 0).unwrap();
        let runs = 4000;
        let takeoffs = (0..runs)
            .filter(|&seed| simulate_hybrid(&p, seed, 30).unwrap().took_off())
            .count();
        let expect = 1.0 - 1.0 / 2.394;
        let freq = takeoffs as f64 / runs as f64;
        let se = (expect * (1.0 - expect) / runs as f64).sqrt();
        assert!(
            (freq - expect).abs() < 3.0 * se,
            "takeoff frequency {freq} vs {expect} (se {se})"
        );
    }

    #[test]
    fn surviving_runs_report_positive_terminal_fractions() {
        let p = GeneralParams::new(400, 0.006, 1.0, 1, 239, 160).unwrap();
        let mut saw_takeoff = false;
        for seed in 0..200 {
            if let HybridOutcome::LateExtinction { switch_time, xc_inf, xf_inf } =
                simulate_hybrid(&p, seed, 30).unwrap()
            {
                saw_takeoff = true;
                assert!(switch_time > 0.0);
                assert!(xc_inf > 0.0 && xc_inf < 239.0 / 400.0);
                assert!(xf_inf > 0.0 && xf_inf < 160.0 / 400.0);
                // Proportionality against the depleted handoff pool: the
                // ratio can only exceed the t = 0 value xf0/xc0.
                assert!(xf_inf / xc_inf >= 160.0 / 239.0 * (1.0 - 1e-12));
            }
        }
        assert!(saw_takeoff);
    }
}
