//! Content-owner investment problem: mean-field dynamics with permanent
//! publishers, expected file-acquisition delay, utility, and its
//! maximization over the investment level.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ControlParams;
use crate::numerics::{golden_section_max, integrate_sampled};

/// Local error target per unit time for the control ODE.
const ODE_TOL: f64 = 1e-9;

/// The outer integrand e^{-beta I(t)} is cut off below this value; the
/// remaining tail is added analytically.
const INTEGRAND_FLOOR: f64 = 1e-12;

/// Sampled solution of the publisher ODE.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ControlState {
    pub t: f64,
    /// Non-permanent holders (fraction of N).
    pub y: f64,
    /// Peers without the file (fraction of N).
    pub x: f64,
}

fn rhs(p: &ControlParams) -> impl Fn(f64, &[f64; 4]) -> [f64; 4] + '_ {
    let beta = p.beta();
    let y_star = p.y_star();
    let mu_a = p.mu_of_alpha();
    move |_t, s: &[f64; 4]| {
        let [y, x, i, _j] = *s;
        let serve = beta * (y + y_star) * x;
        [
            serve - mu_a * y,
            -serve,
            y + y_star,
            (-beta * i).exp(),
        ]
    }
}

/// Integrate dy = beta (y + y*) x - mu(alpha) y, dx = -beta (y + y*) x,
/// sampling `points` states uniformly over [0, t_end].
pub fn integrate_control_ode(p: &ControlParams, t_end: f64, points: usize) -> Vec<ControlState> {
    let n = points.max(2);
    let grid: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
    integrate_sampled(
        rhs(p),
        0.0,
        [p.y0(), p.x0(), 0.0, 0.0],
        t_end,
        ODE_TOL,
        &grid,
        |_, _| false,
    )
    .into_iter()
    .map(|(t, [y, x, _, _])| ControlState { t, y, x })
    .collect()
}

/// Cumulative service exposure I(t) = int_0^t (y(s) + y*) ds and the
/// truncated delay integral J(t) = int_0^t e^{-beta I} ds at one horizon.
fn exposure_at(p: &ControlParams, t_end: f64) -> (f64, f64) {
    let beta = p.beta();
    let cutoff = -INTEGRAND_FLOOR.ln();
    let samples = integrate_sampled(
        rhs(p),
        0.0,
        [p.y0(), p.x0(), 0.0, 0.0],
        t_end,
        ODE_TOL,
        &[t_end],
        move |_, s| beta * s[2] > cutoff,
    );
    let (_, [_, _, i, j]) = samples[0];
    (i, j)
}

/// Expected acquisition delay T-bar(alpha) = int_0^infty e^{-beta I(t)} dt.
///
/// The integral is carried alongside the ODE until the integrand falls
/// below 1e-12; the remainder is bounded by the publisher-only decay
/// e^{-beta(I(T) + y*(t-T))} and added in closed form.
pub fn expected_delay(p: &ControlParams) -> f64 {
    let beta = p.beta();
    let y_star = p.y_star();
    // I grows at least y* per unit time, so this horizon suffices even if
    // no other peer ever serves.
    let t_hi = -INTEGRAND_FLOOR.ln() / (beta * y_star) * 1.05 + 1.0;
    let (i_end, j_end) = exposure_at(p, t_hi);
    j_end + (-beta * i_end).exp() / (beta * y_star)
}

/// Content-owner utility h(alpha) = T-bar(alpha) - cost_scale * alpha.
pub fn utility(p: &ControlParams) -> f64 {
    expected_delay(p) - p.cost_scale() * p.alpha()
}

/// CDF of the acquisition time of a tagged peer: 1 - e^{-beta I(t)}.
pub fn acquisition_cdf(p: &ControlParams, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let (i, _) = exposure_at(p, t);
    Ok(1.0 - (-p.beta() * i).exp())
}

/// Acquisition CDF on a whole grid with a single integration pass.
pub fn acquisition_cdf_grid(p: &ControlParams, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if grid.windows(2).any(|w| w[1] < w[0]) || grid.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::NegativeTime(grid.first().copied().unwrap_or(0.0)));
    }
    let t_end = grid.last().copied().unwrap_or(0.0).max(1e-9);
    let beta = p.beta();
    let samples = integrate_sampled(
        rhs(p),
        0.0,
        [p.y0(), p.x0(), 0.0, 0.0],
        t_end,
        ODE_TOL,
        grid,
        |_, _| false,
    );
    Ok(samples
        .into_iter()
        .map(|(t, [_, _, i, _])| (t, 1.0 - (-beta * i).exp()))
        .collect())
}

/// Delay and utility tabulated over an investment grid.
#[derive(Debug, Clone, Serialize)]
pub struct DelayCurve {
    pub alphas: Vec<f64>,
    pub t_bars: Vec<f64>,
    pub utilities: Vec<f64>,
}

impl DelayCurve {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.alphas
            .iter()
            .zip(&self.t_bars)
            .zip(&self.utilities)
            .map(|((&a, &t), &h)| (a, t, h))
    }
}

/// Evaluate T-bar and h over a strictly increasing alpha grid.
pub fn delay_curve(template: &ControlParams, alphas: &[f64]) -> Result<DelayCurve> {
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidRate("alpha grid must strictly increase".into()));
    }
    let t_bars: Result<Vec<f64>> = alphas
        .par_iter()
        .map(|&a| Ok(expected_delay(&template.at_alpha(a)?)))
        .collect();
    let t_bars = t_bars?;
    let utilities = alphas
        .iter()
        .zip(&t_bars)
        .map(|(&a, &t)| t - template.cost_scale() * a)
        .collect();
    Ok(DelayCurve { alphas: alphas.to_vec(), t_bars, utilities })
}

/// Maximize h over [lo, hi]: a 32-point scan brackets the global maximum,
/// then golden-section search refines to 1e-4 in alpha. A maximum on the
/// range boundary is reported as an error carrying the endpoint value.
pub fn optimize_alpha(template: &ControlParams, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(lo >= 0.0) || hi < lo {
        return Err(Error::InvalidRate(format!("bad alpha range [{lo}, {hi}]")));
    }
    let h = |a: f64| utility(&template.at_alpha(a).expect("alpha >= lo >= 0"));
    if hi == lo {
        return Ok((lo, h(lo)));
    }
    const SCAN: usize = 32;
    let grid: Vec<f64> = (0..SCAN)
        .map(|i| lo + (hi - lo) * i as f64 / (SCAN - 1) as f64)
        .collect();
    let values: Vec<f64> = grid.par_iter().map(|&a| h(a)).collect();
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite utility"))
        .map(|(i, _)| i)
        .unwrap();
    if best == 0 || best == SCAN - 1 {
        return Err(Error::NoInteriorMax { alpha: grid[best], utility: values[best] });
    }
    let (a_star, h_star) = golden_section_max(h, grid[best - 1], grid[best + 1], 1e-4);
    Ok((a_star, h_star))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig9_params(alpha: f64) -> ControlParams {
        ControlParams::new(500, 2.0, 0.5, alpha, 2.0 / 500.0, 0.0, 498.0 / 500.0).unwrap()
    }

    #[test]
    fn ode_without_susceptibles_decays() {
        let p = ControlParams::new(500, 2.0, 0.5, 2.0, 0.5, 0.5, 0.0).unwrap();
        let path = integrate_control_ode(&p, 5.0, 51);
        for s in &path {
            assert!((s.y - 0.5 * (-s.t).exp()).abs() < 1e-8, "t = {}", s.t);
            assert_eq!(s.x, 0.0);
        }
    }

    #[test]
    fn ode_qualitative_shape() {
        // y rises from zero, peaks, decays; x decreases monotonically.
        let p = fig9_params(2.0);
        let path = integrate_control_ode(&p, 40.0, 401);
        assert_eq!(path[0].y, 0.0);
        let peak = path
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.y.partial_cmp(&b.1.y).unwrap())
            .unwrap()
            .0;
        assert!(peak > 0 && peak < path.len() - 1);
        assert!(path[peak].y > 0.05);
        assert!(path.last().unwrap().y < path[peak].y / 10.0);
        for w in path.windows(2) {
            assert!(w[1].x <= w[0].x + 1e-12);
        }
    }

    #[test]
    fn delay_reduces_to_publisher_only_when_no_lingering() {
        // mu(alpha) large: served peers leave almost at once, y stays near
        // zero and T-bar approaches 1/(beta y*) from below.
        let p = fig9_params(100.0);
        let limit = 1.0 / (2.0 * 0.004);
        let t_bar = expected_delay(&p);
        assert!(
            t_bar < limit && (t_bar - limit).abs() / limit < 0.02,
            "t_bar {t_bar} vs limit {limit}"
        );
    }

    #[test]
    fn delay_bounds_hold() {
        for alpha in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let p = fig9_params(alpha);
            let t_bar = expected_delay(&p);
            let lo = 1.0 / p.beta();
            let hi = 1.0 / (p.beta() * p.y_star());
            assert!(
                t_bar >= lo && t_bar <= hi,
                "alpha = {alpha}: T-bar {t_bar} outside [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn delay_nondecreasing_in_alpha() {
        let mut last = 0.0;
        for i in 0..10 {
            let alpha = 0.5 * i as f64;
            let t_bar = expected_delay(&fig9_params(alpha));
            assert!(
                t_bar >= last - 1e-6,
                "alpha = {alpha}: {t_bar} < previous {last}"
            );
            last = t_bar;
        }
    }

    #[test]
    fn utility_definition_and_large_alpha_decline() {
        let p = fig9_params(0.0);
        assert!((utility(&p) - expected_delay(&p)).abs() < 1e-12);
        // Cost dominates once T-bar saturates at 1/(beta y*) = 125.
        let p = fig9_params(140.0);
        assert!(utility(&p) < 0.0);
    }

    #[test]
    fn acquisition_cdf_endpoints_and_monotone() {
        let p = fig9_params(2.0);
        assert_eq!(acquisition_cdf(&p, 0.0).unwrap(), 0.0);
        let mut last = 0.0;
        for i in 1..=10 {
            let t = i as f64 * 2.0;
            let v = acquisition_cdf(&p, t).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert!(acquisition_cdf(&p, 4000.0).unwrap() > 1.0 - 1e-3);
    }

    #[test]
    fn optimizer_degenerate_and_boundary_cases() {
        let p = fig9_params(0.0);
        let (a, h) = optimize_alpha(&p, 1.0, 1.0).unwrap();
        assert_eq!(a, 1.0);
        assert!((h - utility(&p.at_alpha(1.0).unwrap())).abs() < 1e-12);

        // Monotone decreasing utility on a range past saturation.
        match optimize_alpha(&p, 50.0, 80.0) {
            Err(Error::NoInteriorMax { alpha, .. }) => assert_eq!(alpha, 50.0),
            other => panic!("expected NoInteriorMax, got {other:?}"),
        }
    }

    #[test]
    fn delay_curve_matches_pointwise_eval() {
        let p = fig9_params(0.0);
        let curve = delay_curve(&p, &[0.0, 1.0, 2.0]).unwrap();
        for (a, t, h) in curve.rows() {
            let q = p.at_alpha(a).unwrap();
            assert!((t - expected_delay(&q)).abs() < 1e-12);
            assert!((h - utility(&q)).abs() < 1e-12);
            assert!(t.is_finite() && t > 0.0);
        }
    }
}
