//! Exact transient analysis of the general model for tiny populations:
//! terminal distributions from the first-step equations and the
//! extinction-time CDF by uniformization. Serves as an independent oracle
//! for the Monte Carlo path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::GeneralParams;

/// Largest population the dense solver accepts.
const MAX_N: u32 = 8;

/// Poisson-tail truncation target for uniformization.
const UNIFORMIZATION_EPS: f64 = 1e-10;

/// Probability of ending with a given number of never-served peers.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TerminalOutcome {
    pub xc: u32,
    pub xf: u32,
    pub probability: f64,
}

/// Exact transient quantities of the absorbing chain.
#[derive(Debug, Clone)]
pub struct ExactTransient {
    /// P(extinction time <= t) on the requested grid.
    pub extinction_cdf: Vec<(f64, f64)>,
    /// Distribution of the absorbing (xc, xf) corner, sorted by (xc, xf),
    /// zero-probability outcomes omitted.
    pub terminal: Vec<TerminalOutcome>,
}

struct StateSpace {
    y_max: u32,
    nc: u32,
    nf: u32,
}

impl StateSpace {
    fn len(&self) -> usize {
        (self.y_max as usize + 1) * (self.nc as usize + 1) * (self.nf as usize + 1)
    }

    fn index(&self, y: u32, xc: u32, xf: u32) -> usize {
        ((y as usize * (self.nc as usize + 1)) + xc as usize) * (self.nf as usize + 1)
            + xf as usize
    }

    fn unpack(&self, idx: usize) -> (u32, u32, u32) {
        let nf1 = self.nf as usize + 1;
        let nc1 = self.nc as usize + 1;
        let xf = (idx % nf1) as u32;
        let xc = ((idx / nf1) % nc1) as u32;
        let y = (idx / (nf1 * nc1)) as u32;
        (y, xc, xf)
    }
}

/// Per-state transitions: (rate, destination index).
fn transitions(
    space: &StateSpace,
    lambda: f64,
    mu: f64,
    y: u32,
    xc: u32,
    xf: u32,
) -> [(f64, usize); 3] {
    let mut out = [(0.0, 0); 3];
    if y > 0 {
        if xc > 0 && y < space.y_max {
            out[0] = (
                lambda * y as f64 * xc as f64,
                space.index(y + 1, xc - 1, xf),
            );
        }
        out[1] = (mu * y as f64, space.index(y - 1, xc, xf));
        if xf > 0 {
            out[2] = (lambda * y as f64 * xf as f64, space.index(y, xc, xf - 1));
        }
    }
    out
}

/// Enumerate the finite state space, solve the first-step equations for the
/// terminal distribution, and compute the extinction-time CDF on `t_grid`
/// by uniformization with truncation error below 1e-10.
///
/// Every transition strictly decreases 2(xc + xf) + y, so the first-step
/// system is triangular under that ordering and one sweep solves it
/// exactly.
pub fn exact_small_n(p: &GeneralParams, t_grid: &[f64]) -> Result<ExactTransient> {
    if p.n_total() > MAX_N {
        return Err(Error::StateSpaceTooLarge(p.n_total()));
    }
    if p.mu() == 0.0 {
        return Err(Error::InvalidRate(
            "exact transient analysis requires mu > 0".into(),
        ));
    }
    if t_grid.iter().any(|&t| t < 0.0) {
        return Err(Error::NegativeTime(
            t_grid.iter().copied().fold(f64::INFINITY, f64::min),
        ));
    }
    let space = StateSpace { y_max: p.y0() + p.nc(), nc: p.nc(), nf: p.nf() };
    let (lambda, mu) = (p.lambda(), p.mu());
    let n_states = space.len();

    // Terminal distribution: push the initial mass through the DAG in
    // decreasing 2(xc+xf)+y order.
    let mut order: Vec<usize> = (0..n_states).collect();
    let level = |idx: usize| {
        let (y, xc, xf) = space.unpack(idx);
        2 * (xc + xf) + y
    };
    order.sort_by_key(|&idx| std::cmp::Reverse(level(idx)));

    let mut mass = vec![0.0_f64; n_states];
    mass[space.index(p.y0(), p.nc(), p.nf())] = 1.0;
    let mut terminal = Vec::new();
    for &idx in &order {
        let m = mass[idx];
        if m == 0.0 {
            continue;
        }
        let (y, xc, xf) = space.unpack(idx);
        if y == 0 {
            terminal.push(TerminalOutcome { xc, xf, probability: m });
            continue;
        }
        let trans = transitions(&space, lambda, mu, y, xc, xf);
        let total: f64 = trans.iter().map(|(r, _)| r).sum();
        for (rate, dest) in trans {
            if rate > 0.0 {
                mass[dest] += m * rate / total;
            }
        }
    }
    terminal.sort_by_key(|o| (o.xc, o.xf));

    // Uniformization at 1.1x the maximum exit rate.
    let mut max_rate = 0.0_f64;
    for idx in 0..n_states {
        let (y, xc, xf) = space.unpack(idx);
        let total: f64 = transitions(&space, lambda, mu, y, xc, xf)
            .iter()
            .map(|(r, _)| r)
            .sum();
        max_rate = max_rate.max(total);
    }
    let uni_rate = 1.1 * max_rate;

    // Absorbed mass after n uniformized jumps, up to the horizon needed for
    // the largest grid time.
    let t_last = t_grid.iter().copied().fold(0.0, f64::max);
    let lam_t_last = uni_rate * t_last;
    let n_max = poisson_horizon(lam_t_last);
    let mut absorbed_after = Vec::with_capacity(n_max + 1);
    let mut v = vec![0.0_f64; n_states];
    v[space.index(p.y0(), p.nc(), p.nf())] = 1.0;
    let absorbed = |v: &[f64]| -> f64 {
        let mut s = 0.0;
        for xc in 0..=space.nc {
            for xf in 0..=space.nf {
                s += v[space.index(0, xc, xf)];
            }
        }
        s
    };
    absorbed_after.push(absorbed(&v));
    let mut next = vec![0.0_f64; n_states];
    for _ in 0..n_max {
        next.iter_mut().for_each(|x| *x = 0.0);
        for idx in 0..n_states {
            let m = v[idx];
            if m == 0.0 {
                continue;
            }
            let (y, xc, xf) = space.unpack(idx);
            let trans = transitions(&space, lambda, mu, y, xc, xf);
            let total: f64 = trans.iter().map(|(r, _)| r).sum();
            next[idx] += m * (1.0 - total / uni_rate);
            for (rate, dest) in trans {
                if rate > 0.0 {
                    next[dest] += m * rate / uni_rate;
                }
            }
        }
        std::mem::swap(&mut v, &mut next);
        absorbed_after.push(absorbed(&v));
    }

    let extinction_cdf = t_grid
        .iter()
        .map(|&t| (t, poisson_mixture(uni_rate * t, &absorbed_after)))
        .collect();

    Ok(ExactTransient { extinction_cdf, terminal })
}

/// Smallest n with P(Poisson(lam) > n) < eps, with slack.
fn poisson_horizon(lam: f64) -> usize {
    if lam == 0.0 {
        return 0;
    }
    let mut ln_fact = 0.0;
    let mut cum = 0.0;
    let mut n = 0usize;
    loop {
        let ln_pmf = -lam + n as f64 * lam.ln() - ln_fact;
        cum += ln_pmf.exp();
        if cum >= 1.0 - UNIFORMIZATION_EPS && n as f64 > lam {
            return n;
        }
        n += 1;
        ln_fact += (n as f64).ln();
        if n > 10_000_000 {
            return n;
        }
    }
}

/// Sum_n Poisson(lam; n) * weights[n], log-space pmf to survive large lam.
fn poisson_mixture(lam: f64, weights: &[f64]) -> f64 {
    if lam == 0.0 {
        return weights[0];
    }
    let mut ln_fact = 0.0;
    let mut total = 0.0;
    let mut cum = 0.0;
    for (n, &w) in weights.iter().enumerate() {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let pmf = (-lam + n as f64 * lam.ln() - ln_fact).exp();
        total += pmf * w;
        cum += pmf;
        if cum >= 1.0 - UNIFORMIZATION_EPS && n as f64 > lam {
            break;
        }
    }
    // Remaining Poisson tail carries weights in [0, 1]; the truncation
    // error is below UNIFORMIZATION_EPS by construction.
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_large_populations() {
        let p = GeneralParams::new(9, 0.1, 1.0, 1, 8, 0).unwrap();
        assert!(matches!(
            exact_small_n(&p, &[1.0]),
            Err(Error::StateSpaceTooLarge(9))
        ));
    }

    #[test]
    fn two_peer_terminal_split_cooperative() {
        // N = 2, y0 = 1, nc = 1: the lone susceptible is served first with
        // probability lambda/(lambda+mu), otherwise stays at xc = 1.
        let (lambda, mu) = (0.7, 1.3);
        let p = GeneralParams::new(2, lambda, mu, 1, 1, 0).unwrap();
        let res = exact_small_n(&p, &[0.0]).unwrap();
        let p_unserved = res
            .terminal
            .iter()
            .find(|o| o.xc == 1 && o.xf == 0)
            .unwrap()
            .probability;
        assert!((p_unserved - mu / (lambda + mu)).abs() < 1e-14);
        let total: f64 = res.terminal.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_peer_terminal_split_free_rider() {
        let (lambda, mu) = (0.7, 1.3);
        let p = GeneralParams::new(2, lambda, mu, 1, 0, 1).unwrap();
        let res = exact_small_n(&p, &[0.0]).unwrap();
        let never_served = res
            .terminal
            .iter()
            .find(|o| o.xf == 1)
            .unwrap()
            .probability;
        assert!((never_served - mu / (lambda + mu)).abs() < 1e-14);
    }

    #[test]
    fn cdf_pure_death_matches_exponential() {
        let p = GeneralParams::new(1, 0.4, 1.0, 1, 0, 0).unwrap();
        let grid = [0.0, 0.5, 1.0, 2.0, 5.0];
        let res = exact_small_n(&p, &grid).unwrap();
        for (t, f) in res.extinction_cdf {
            assert!(
                (f - (1.0 - (-t).exp())).abs() < 1e-9,
                "t = {t}: {f} vs {}",
                1.0 - (-t).exp()
            );
        }
    }

    #[test]
    fn cdf_is_monotone_and_approaches_one() {
        let p = GeneralParams::new(4, 1.0, 1.0, 1, 2, 1).unwrap();
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.5).collect();
        let res = exact_small_n(&p, &grid).unwrap();
        let mut last = -1.0;
        for (_, f) in &res.extinction_cdf {
            assert!(*f >= last - 1e-12);
            last = *f;
        }
        assert!(last > 1.0 - 1e-6);
    }
}
