//! Event-driven exact samplers: draw the holding time from the total exit
//! rate, pick the transition proportionally to its rate, update the counts.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{ControlParams, FixedRateParams, FixedRateState, GeneralParams, GeneralState};
use crate::rng::{exp_time, rng_for, SimRng};
use crate::sim::{StateSample, TerminalReason, Trajectory};

/// Default horizon used by callers that do not pick one: 50 mean lingering
/// times exhausts the late-extinction mass at the parameter scales of
/// interest.
pub fn default_t_max(mu: f64) -> f64 {
    if mu > 0.0 {
        50.0 / mu
    } else {
        f64::INFINITY
    }
}

fn push<S: StateSample>(events: &mut Vec<S>, s: S) {
    events.push(s);
}

/// Sample the general free-rider model.
///
/// Transitions out of (y, xc, xf): a cooperative peer is served with rate
/// lambda y xc, a holder departs with rate mu y, a free rider is served
/// (and leaves) with rate lambda y xf. Absorbed at y = 0; when no
/// transition is possible with y > 0 (mu = 0 and everyone served) the path
/// ends as all-served.
pub fn simulate_general(p: &GeneralParams, seed: u64, t_max: f64) -> Trajectory<GeneralState> {
    let mut rng = rng_for(seed, 0);
    let lambda = p.lambda();
    let mu = p.mu();
    let mut s = GeneralState { t: 0.0, y: p.y0(), xc: p.nc(), xf: p.nf() };
    let mut events = vec![s];

    let terminal_reason = loop {
        if s.y == 0 {
            break TerminalReason::AbsorbedYZero;
        }
        let r_serve = lambda * s.y as f64 * s.xc as f64;
        let r_depart = mu * s.y as f64;
        let r_free = lambda * s.y as f64 * s.xf as f64;
        let total = r_serve + r_depart + r_free;
        if total == 0.0 {
            break TerminalReason::AllServed;
        }
        let t_next = s.t + exp_time(total, &mut rng);
        if t_next > t_max {
            break TerminalReason::TimeLimit;
        }
        s.t = t_next;
        let pick: f64 = rng.random::<f64>() * total;
        if pick < r_serve {
            s.y += 1;
            s.xc -= 1;
        } else if pick < r_serve + r_depart {
            s.y -= 1;
        } else {
            s.xf -= 1;
        }
        push(&mut events, s);
    };

    Trajectory { seed, events, terminal_reason }
}

/// Sample the fully cooperative model (mu = 0, no free riders): a pure
/// birth path with rate lambda y (N - y), absorbed at y = N.
pub fn simulate_fully_cooperative(
    p: &GeneralParams,
    seed: u64,
) -> Result<Trajectory<GeneralState>> {
    if p.mu() != 0.0 {
        return Err(Error::InvalidRate(format!(
            "fully cooperative model requires mu = 0, got {}",
            p.mu()
        )));
    }
    if p.nf() != 0 {
        return Err(Error::InvalidRate(format!(
            "fully cooperative model requires nf = 0, got {}",
            p.nf()
        )));
    }
    let mut rng = rng_for(seed, 0);
    let lambda = p.lambda();
    let n = p.n_total();
    let mut s = GeneralState { t: 0.0, y: p.y0(), xc: p.nc(), xf: 0 };
    let mut events = vec![s];
    while s.y < n {
        let rate = lambda * s.y as f64 * (n - s.y) as f64;
        s.t += exp_time(rate, &mut rng);
        s.y += 1;
        s.xc -= 1;
        push(&mut events, s);
    }
    Ok(Trajectory { seed, events, terminal_reason: TerminalReason::AllServed })
}

/// Sample the fixed-request-rate model: a peer without the file is served
/// with rate lambda y x / (y + x) (a peer may contact itself), holders
/// depart with rate mu y. Absorbed at y = 0.
pub fn simulate_fixed_rate(
    p: &FixedRateParams,
    seed: u64,
    t_max: f64,
) -> Trajectory<FixedRateState> {
    let mut rng = rng_for(seed, 0);
    let lambda = p.lambda();
    let mu = p.mu();
    let mut s = FixedRateState { t: 0.0, y: p.y0(), x: p.n_total() - p.y0() };
    let mut events = vec![s];

    let terminal_reason = loop {
        if s.y == 0 {
            break TerminalReason::AbsorbedYZero;
        }
        let pop = (s.y + s.x) as f64;
        let r_serve = lambda * s.y as f64 * s.x as f64 / pop;
        let r_depart = mu * s.y as f64;
        let total = r_serve + r_depart;
        let t_next = s.t + exp_time(total, &mut rng);
        if t_next > t_max {
            break TerminalReason::TimeLimit;
        }
        s.t = t_next;
        if rng.random::<f64>() * total < r_serve {
            s.y += 1;
            s.x -= 1;
        } else {
            s.y -= 1;
        }
        push(&mut events, s);
    };

    Trajectory { seed, events, terminal_reason }
}

/// Sample the cooperation-control model: `y_star` permanent publishers
/// never depart, non-permanent holders depart at rate mu(alpha), and peers
/// without the file are served with rate (beta/N)(y + y*) x.
///
/// The path records non-permanent holders as `y`; it ends when every peer
/// has been served and all non-permanent holders are gone.
pub fn simulate_control(p: &ControlParams, seed: u64, t_max: f64) -> Trajectory<FixedRateState> {
    let mut rng = rng_for(seed, 0);
    let n = p.n_total() as f64;
    let lambda = p.beta() / n;
    let mu_a = p.mu_of_alpha();
    let y_star = ((p.y_star() * n).round() as u32).max(1);
    let y0 = (p.y0() * n).round() as u32;
    let x0 = p.n_total() - y_star - y0;

    let mut s = FixedRateState { t: 0.0, y: y0, x: x0 };
    let mut events = vec![s];

    let terminal_reason = loop {
        let r_serve = lambda * (s.y + y_star) as f64 * s.x as f64;
        let r_depart = mu_a * s.y as f64;
        let total = r_serve + r_depart;
        if total == 0.0 {
            break if s.x == 0 {
                TerminalReason::AllServed
            } else {
                TerminalReason::AbsorbedYZero
            };
        }
        let t_next = s.t + exp_time(total, &mut rng);
        if t_next > t_max {
            break TerminalReason::TimeLimit;
        }
        s.t = t_next;
        if rng.random::<f64>() * total < r_serve {
            s.y += 1;
            s.x -= 1;
        } else {
            s.y -= 1;
        }
        push(&mut events, s);
    };

    Trajectory { seed, events, terminal_reason }
}

/// Test-support sampler of the plain linear birth-death chain (used by the
/// hybrid scheme and by oracle checks): births at rate `birth * y`, deaths
/// at rate `death * y`, run until extinction or `y_cap`.
pub(crate) fn branching_walk(
    birth: f64,
    death: f64,
    y0: u32,
    y_cap: u32,
    rng: &mut SimRng,
) -> (f64, u32, u64) {
    let mut y = y0;
    let mut t = 0.0;
    let mut births: u64 = 0;
    while y > 0 && y < y_cap {
        let total = (birth + death) * y as f64;
        t += exp_time(total, rng);
        if rng.random::<f64>() * (birth + death) < birth {
            y += 1;
            births += 1;
        } else {
            y -= 1;
        }
    }
    (t, y, births)
}
