//! Mean-field (fluid-limit) analytics of the general swarm model: the ODE
//! system, its first integral, peak torrent size, terminal uninfected
//! fractions, terminal time, and the phase-transition location.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GeneralParams, MeanFieldState};
use crate::numerics::{bisect, integrate_sampled};

/// Fraction of peers below which the torrent is treated as extinct and the
/// integration freezes.
const Y_FLOOR: f64 = 1e-14;

/// Local error target per unit time for the ODE integration.
const ODE_TOL: f64 = 1e-9;

/// Parameters of the rescaled system: fractions (y, x_c, x_f) evolve by
/// dy = y(beta x_c - mu), dx_c = -beta y x_c, dx_f = -beta y x_f.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeanFieldParamsRaw")]
pub struct MeanFieldParams {
    beta: f64,
    mu: f64,
    y0: f64,
    xc0: f64,
    xf0: f64,
}

#[derive(Deserialize)]
struct MeanFieldParamsRaw {
    beta: f64,
    mu: f64,
    y0: f64,
    xc0: f64,
    xf0: f64,
}

impl TryFrom<MeanFieldParamsRaw> for MeanFieldParams {
    type Error = Error;
    fn try_from(r: MeanFieldParamsRaw) -> Result<Self> {
        MeanFieldParams::new(r.beta, r.mu, r.y0, r.xc0, r.xf0)
    }
}

impl MeanFieldParams {
    pub fn new(beta: f64, mu: f64, y0: f64, xc0: f64, xf0: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidRate(format!("beta = {beta} must be > 0")));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidRate(format!("mu = {mu} must be >= 0")));
        }
        if !(y0 > 0.0 && y0 <= 1.0) {
            return Err(Error::InvalidFractions(format!("y0 = {y0} not in (0, 1]")));
        }
        if !(xc0 >= 0.0) || !(xf0 >= 0.0) {
            return Err(Error::InvalidFractions(format!(
                "xc0 = {xc0}, xf0 = {xf0} must be non-negative"
            )));
        }
        if (y0 + xc0 + xf0 - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidFractions(format!(
                "y0 + xc0 + xf0 = {} != 1",
                y0 + xc0 + xf0
            )));
        }
        Ok(Self { beta, mu, y0, xc0, xf0 })
    }

    /// Rescale integer counts: y0 = Y(0)/N and so on, with beta = lambda N.
    pub fn from_general(p: &GeneralParams) -> Result<Self> {
        let n = p.n_total() as f64;
        Self::new(
            p.beta(),
            p.mu(),
            p.y0() as f64 / n,
            p.nc() as f64 / n,
            p.nf() as f64 / n,
        )
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn y0(&self) -> f64 {
        self.y0
    }
    pub fn xc0(&self) -> f64 {
        self.xc0
    }
    pub fn xf0(&self) -> f64 {
        self.xf0
    }

    pub fn theta(&self) -> Result<f64> {
        if self.mu == 0.0 {
            return Err(Error::DivisionByZero("theta"));
        }
        Ok(self.beta / self.mu)
    }

    /// First-integral constant phi(theta) = x_c0 + y0 - ln(x_c0)/theta.
    pub fn phi(&self) -> Result<f64> {
        if self.xc0 <= 0.0 {
            return Err(Error::NonPositiveXc(self.xc0));
        }
        Ok(self.xc0 + self.y0 - self.xc0.ln() / self.theta()?)
    }
}

/// Closed-form torrent fraction of the fully cooperative model
/// (mu = 0, no free riders): y0 / (y0 + (1-y0) e^{-beta t}).
pub fn fully_coop_closed_form(beta: f64, y0: f64, t: f64) -> f64 {
    y0 / (y0 + (1.0 - y0) * (-beta * t).exp())
}

/// Integrate the three-component ODE system, sampling `points` states on a
/// uniform grid over [0, t_end]. Integration freezes once y has effectively
/// hit zero.
pub fn integrate_ode(p: &MeanFieldParams, t_end: f64, points: usize) -> Result<Vec<MeanFieldState>> {
    if p.mu == 0.0 {
        return Err(Error::DivisionByZero("theta"));
    }
    let n = points.max(2);
    let grid: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
    let beta = p.beta;
    let mu = p.mu;
    let samples = integrate_sampled(
        move |_, s: &[f64; 3]| {
            let [y, xc, xf] = *s;
            [y * (beta * xc - mu), -beta * y * xc, -beta * y * xf]
        },
        0.0,
        [p.y0, p.xc0, p.xf0],
        t_end,
        ODE_TOL,
        &grid,
        |_, s| s[0] < Y_FLOOR,
    );
    Ok(samples
        .into_iter()
        .map(|(t, [y, xc, xf])| MeanFieldState { t, y, xc, xf })
        .collect())
}

/// First integral x_c + y - ln(x_c)/theta; constant (= phi) along exact
/// trajectories.
pub fn conserved_quantity(state: &MeanFieldState, p: &MeanFieldParams) -> Result<f64> {
    if state.xc <= 0.0 {
        return Err(Error::NonPositiveXc(state.xc));
    }
    Ok(state.xc + state.y - state.xc.ln() / p.theta()?)
}

/// Peak torrent fraction and the cooperative fraction at the peak.
///
/// The peak is interior (at x_c = 1/theta) only when x_c actually passes
/// through 1/theta, i.e. theta * x_c0 > 1; otherwise y is maximal at t = 0.
pub fn peak_fraction(p: &MeanFieldParams) -> Result<(f64, f64)> {
    let theta = p.theta()?;
    if theta * p.xc0 > 1.0 {
        let y_max = -(1.0 + theta.ln()) / theta + p.phi()?;
        Ok((y_max, 1.0 / theta))
    } else {
        Ok((p.y0, p.xc0))
    }
}

/// Root of x - ln(x)/theta = xc_init + y_init - ln(xc_init)/theta in
/// (0, xc_init). Also serves the hybrid handoff, whose initial fractions
/// need not sum to one.
pub(crate) fn xc_limit(theta: f64, y_init: f64, xc_init: f64) -> Result<f64> {
    if xc_init <= 0.0 {
        return Err(Error::NonPositiveXc(xc_init));
    }
    let phi = xc_init + y_init - xc_init.ln() / theta;
    let g = |x: f64| x - x.ln() / theta - phi;
    // g(xc_init) = -y_init < 0 and g -> +inf as x -> 0+, so the bracket is
    // guaranteed unless the root lies below the smallest positive double.
    let lo = f64::MIN_POSITIVE;
    if g(lo) <= 0.0 {
        return Ok(0.0);
    }
    bisect(g, lo, xc_init, 1e-12)
}

/// Terminal uninfected fractions (x_c(inf), x_f(inf)).
///
/// x_c(inf) is the unique root of x - ln(x)/theta - phi in (0, x_c0); the
/// free-rider limit follows from the proportionality x_f = (x_f0/x_c0) x_c.
pub fn terminal_uninfected(p: &MeanFieldParams) -> Result<(f64, f64)> {
    let xc_inf = xc_limit(p.theta()?, p.y0, p.xc0)?;
    Ok((xc_inf, p.xf0 * xc_inf / p.xc0))
}

/// Terminal time tau of the time-changed process: the unique positive
/// solution of x_c0 + y0 = x_c0 e^{-beta tau} + mu tau.
pub fn terminal_time(p: &MeanFieldParams) -> Result<f64> {
    if p.mu == 0.0 {
        return Err(Error::DivisionByZero("theta"));
    }
    let (beta, mu, xc0, y0) = (p.beta, p.mu, p.xc0, p.y0);
    let f = |tau: f64| xc0 * (-beta * tau).exp() + mu * tau - (xc0 + y0);
    let hi = (xc0 + y0) / mu + 1.0 / beta;
    bisect(f, 0.0, hi, 1e-10)
}

/// The content-availability phase transition sits at theta = 1/x_c0.
pub fn phase_transition_theta(xc0: f64) -> f64 {
    1.0 / xc0
}

/// One row of the phase-diagram sweep (Fig-1 style data).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub xc0: f64,
    pub theta_xc0: f64,
    pub xc_inf: f64,
    pub xf_inf: f64,
    pub y_max: f64,
    pub tau: f64,
}

/// Sweep theta * x_c0 over a grid for fixed initial fractions.
pub fn sweep_phase_diagram(
    y0: f64,
    xc0: f64,
    mu: f64,
    theta_xc0_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(theta_xc0_grid.len());
    for &txc in theta_xc0_grid {
        let theta = txc / xc0;
        let p = MeanFieldParams::new(theta * mu, mu, y0, xc0, 1.0 - y0 - xc0)?;
        let (xc_inf, xf_inf) = terminal_uninfected(&p)?;
        let (y_max, _) = peak_fraction(&p)?;
        let tau = terminal_time(&p)?;
        rows.push(SweepRow { xc0, theta_xc0: txc, xc_inf, xf_inf, y_max, tau });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta2_params() -> MeanFieldParams {
        MeanFieldParams::new(2.0, 1.0, 0.05, 0.95, 0.0).unwrap()
    }

    #[test]
    fn closed_form_endpoints() {
        assert_eq!(fully_coop_closed_form(1.0, 1.0, 3.0), 1.0);
        assert_eq!(fully_coop_closed_form(2.0, 0.3, 0.0), 0.3);
    }

    #[test]
    fn closed_form_balance_point() {
        // At e^{-beta t} = 1/19 both terms of the denominator are 0.05.
        let v = fully_coop_closed_form(1.0, 0.05, (19.0_f64).ln());
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn integrate_pure_decay_without_susceptibles() {
        let p = MeanFieldParams::new(1.5, 1.0, 1.0, 0.0, 0.0).unwrap();
        let path = integrate_ode(&p, 5.0, 51).unwrap();
        for s in path {
            assert!((s.y - (-s.t).exp()).abs() < 1e-8, "t = {}", s.t);
            assert_eq!(s.xc, 0.0);
        }
    }

    #[test]
    fn free_rider_path_stays_proportional() {
        let p = MeanFieldParams::new(3.0, 1.0, 0.05, 0.5, 0.45).unwrap();
        let path = integrate_ode(&p, 30.0, 301).unwrap();
        for s in &path {
            assert!(
                (s.xf * p.xc0() - p.xf0() * s.xc).abs() < 1e-8,
                "t = {}: xf xc0 = {} vs xf0 xc = {}",
                s.t,
                s.xf * p.xc0(),
                p.xf0() * s.xc
            );
        }
    }

    #[test]
    fn conserved_quantity_starts_at_phi_and_drifts_little() {
        let p = theta2_params();
        let phi = p.phi().unwrap();
        assert!((phi - (1.0 - 0.95_f64.ln() / 2.0)).abs() < 1e-15);
        let path = integrate_ode(&p, 20.0, 201).unwrap();
        assert!((conserved_quantity(&path[0], &p).unwrap() - phi).abs() < 1e-15);
        for s in &path {
            if s.xc > 1e-12 {
                let c = conserved_quantity(s, &p).unwrap();
                assert!((c - phi).abs() < 1e-7, "t = {}: drift {}", s.t, (c - phi).abs());
            }
        }
    }

    #[test]
    fn phi_arithmetic_theta_one() {
        let p = MeanFieldParams::new(1.0, 1.0, 0.05, 0.95, 0.0).unwrap();
        assert!((p.phi().unwrap() - 1.051293).abs() < 1e-6);
    }

    #[test]
    fn conserved_quantity_rejects_nonpositive_xc() {
        let p = theta2_params();
        let s = MeanFieldState { t: 0.0, y: 0.1, xc: 0.0, xf: 0.0 };
        assert!(matches!(
            conserved_quantity(&s, &p),
            Err(Error::NonPositiveXc(_))
        ));
    }

    #[test]
    fn peak_fraction_interior_theta_two() {
        let p = theta2_params();
        let (y_max, xc_at) = peak_fraction(&p).unwrap();
        // -(1 + ln 2)/2 + phi(2)
        let expect = -(1.0 + 2.0_f64.ln()) / 2.0 + p.phi().unwrap();
        assert!((y_max - expect).abs() < 1e-15);
        assert!((y_max - 0.179073).abs() < 1e-6);
        assert!((xc_at - 0.5).abs() < 1e-15);
    }

    #[test]
    fn peak_fraction_boundary_when_subcritical() {
        let p = MeanFieldParams::new(0.9, 1.0, 0.05, 0.95, 0.0).unwrap();
        let (y_max, xc_at) = peak_fraction(&p).unwrap();
        assert_eq!((y_max, xc_at), (0.05, 0.95));
    }

    #[test]
    fn peak_fraction_boundary_between_one_and_inverse_xc0() {
        // theta > 1 but theta * xc0 < 1: the interior peak point 1/theta
        // exceeds xc0, so the maximum stays at t = 0.
        let p = MeanFieldParams::new(1.5, 1.0, 0.4, 0.6, 0.0).unwrap();
        let (y_max, xc_at) = peak_fraction(&p).unwrap();
        assert_eq!((y_max, xc_at), (0.4, 0.6));
    }

    #[test]
    fn peak_matches_integrated_path_maximum() {
        let p = theta2_params();
        let (y_max, _) = peak_fraction(&p).unwrap();
        let path = integrate_ode(&p, 30.0, 3001).unwrap();
        let numeric = path.iter().map(|s| s.y).fold(0.0_f64, f64::max);
        assert!((y_max - numeric).abs() < 1e-4);
    }

    #[test]
    fn peak_approaches_everyone_served_for_huge_theta() {
        let p = MeanFieldParams::new(1e6, 1.0, 0.05, 0.95, 0.0).unwrap();
        let (y_max, _) = peak_fraction(&p).unwrap();
        assert!((y_max - 1.0).abs() < 1e-4);
    }

    #[test]
    fn terminal_uninfected_theta_two() {
        let p = theta2_params();
        let (xc_inf, xf_inf) = terminal_uninfected(&p).unwrap();
        assert!((xc_inf - 0.186868).abs() < 1e-3);
        assert_eq!(xf_inf, 0.0);
        // Cross-oracle: long-horizon ODE integration.
        let path = integrate_ode(&p, 1000.0, 2001).unwrap();
        let ode_xc = path.last().unwrap().xc;
        assert!((xc_inf - ode_xc).abs() < 1e-3, "{xc_inf} vs {ode_xc}");
    }

    #[test]
    fn terminal_uninfected_no_dissemination_limit() {
        let p = MeanFieldParams::new(1e-6, 1.0, 0.05, 0.95, 0.0).unwrap();
        let (xc_inf, _) = terminal_uninfected(&p).unwrap();
        assert!((xc_inf - 0.95).abs() < 1e-3);
    }

    #[test]
    fn terminal_uninfected_decreasing_in_theta() {
        let mut last = f64::INFINITY;
        for i in 0..20 {
            let theta = 0.2 * 10.0_f64.powf(i as f64 * 0.1);
            let p = MeanFieldParams::new(theta, 1.0, 0.05, 0.95, 0.0).unwrap();
            let (xc_inf, _) = terminal_uninfected(&p).unwrap();
            assert!(xc_inf < last, "theta = {theta}: {xc_inf} !< {last}");
            last = xc_inf;
        }
    }

    #[test]
    fn terminal_time_degenerate_limits() {
        // beta -> 0: e^{-beta tau} -> 1 and tau -> y0/mu.
        let p = MeanFieldParams::new(1e-9, 1.0, 0.05, 0.95, 0.0).unwrap();
        assert!((terminal_time(&p).unwrap() - 0.05).abs() < 1e-6);
        // xc0 -> 0: the equation degenerates to y0 = mu tau.
        let p = MeanFieldParams::new(2.0, 0.5, 0.9999999999, 1e-10, 0.0).unwrap();
        assert!((terminal_time(&p).unwrap() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn terminal_time_consistent_with_terminal_fraction() {
        // x_c0 e^{-beta tau} solves the terminal equation exactly.
        for (beta, y0, xc0) in [(2.0, 0.05, 0.95), (1.2, 0.1, 0.6), (4.0, 0.02, 0.5)] {
            let p = MeanFieldParams::new(beta, 1.0, y0, xc0, 1.0 - y0 - xc0).unwrap();
            let tau = terminal_time(&p).unwrap();
            let (xc_inf, _) = terminal_uninfected(&p).unwrap();
            let from_tau = xc0 * (-beta * tau).exp();
            assert!(
                (from_tau - xc_inf).abs() < 1e-6,
                "beta = {beta}: {from_tau} vs {xc_inf}"
            );
        }
    }

    #[test]
    fn phase_transition_location() {
        assert!((phase_transition_theta(0.5) - 2.0).abs() < 1e-15);
        assert!((phase_transition_theta(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_brackets_the_transition() {
        let grid = [0.1, 1.0, 100.0];
        let rows = sweep_phase_diagram(0.05, 0.95, 1.0, &grid).unwrap();
        assert!(rows[0].xc_inf / 0.95 >= 0.5);
        assert!(rows[2].xc_inf / 0.95 <= 0.05);
        assert!(rows[0].xc_inf > rows[1].xc_inf && rows[1].xc_inf > rows[2].xc_inf);
    }
}
