//! Closed-form transient analytics of the fixed-request-rate model: scaled
//! trajectories, stop time, terminal uninfected fraction, maximum torrent
//! size, and the two phase transitions (at xi = 1 and xi = 1/x0).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FixedRateParams;

/// Scaled mean-field parameters of the fixed-rate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FixedRateMeanFieldRaw")]
pub struct FixedRateMeanField {
    xi: f64,
    mu: f64,
    x0: f64,
}

#[derive(Deserialize)]
struct FixedRateMeanFieldRaw {
    xi: f64,
    mu: f64,
    x0: f64,
}

impl TryFrom<FixedRateMeanFieldRaw> for FixedRateMeanField {
    type Error = Error;
    fn try_from(r: FixedRateMeanFieldRaw) -> Result<Self> {
        FixedRateMeanField::new(r.xi, r.mu, r.x0)
    }
}

impl FixedRateMeanField {
    pub fn new(xi: f64, mu: f64, x0: f64) -> Result<Self> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::InvalidRate(format!("xi = {xi} must be > 0")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidRate(format!("mu = {mu} must be > 0")));
        }
        if !(x0 > 0.0 && x0 < 1.0) {
            return Err(Error::InvalidFractions(format!("x0 = {x0} not in (0, 1)")));
        }
        Ok(Self { xi, mu, x0 })
    }

    pub fn from_params(p: &FixedRateParams) -> Result<Self> {
        Self::new(p.xi(), p.mu(), 1.0 - p.y0() as f64 / p.n_total() as f64)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn y0(&self) -> f64 {
        1.0 - self.x0
    }
}

/// Scaled trajectory at time t in [0, 1/mu]: x~ = x0 (1-mu t)^xi and
/// y~ = (1-mu t) - x~, which keeps y~ + x~ = 1 - mu t exact and avoids the
/// negative-exponent form at the right endpoint.
pub fn scaled_trajectory(p: &FixedRateMeanField, t: f64) -> Result<(f64, f64)> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let horizon = 1.0 / p.mu;
    if t > horizon * (1.0 + 1e-12) {
        return Err(Error::TimeOutOfRange { t, max: horizon });
    }
    let s = (1.0 - p.mu * t).max(0.0);
    let x_tilde = p.x0 * s.powf(p.xi);
    Ok(((s - x_tilde).max(0.0), x_tilde))
}

/// First time the scaled torrent hits zero:
/// (1 - x0^{1/(1-xi)}) / mu for xi < 1, and 1/mu for xi >= 1.
pub fn stop_time(p: &FixedRateMeanField) -> f64 {
    if p.xi < 1.0 {
        (1.0 - p.x0.powf(1.0 / (1.0 - p.xi))) / p.mu
    } else {
        1.0 / p.mu
    }
}

/// Fraction of peers that never receive the file: x0^{1/(1-xi)} below the
/// xi = 1 transition, zero at or above it.
pub fn terminal_uninfected_fraction(p: &FixedRateMeanField) -> f64 {
    if p.xi < 1.0 {
        p.x0.powf(1.0 / (1.0 - p.xi))
    } else {
        0.0
    }
}

/// Maximum torrent fraction and the time it is attained.
///
/// For xi <= 1/x0 the torrent only shrinks, so the maximum is the initial
/// fraction at t = 0. Beyond that the trajectory is unimodal with the
/// stationary point of y~(s) = s - x0 s^xi at s = (xi x0)^{1/(1-xi)}.
pub fn max_torrent(p: &FixedRateMeanField) -> (f64, f64) {
    if p.xi <= 1.0 / p.x0 {
        (1.0 - p.x0, 0.0)
    } else {
        let e = 1.0 / (1.0 - p.xi);
        let y_max = p.x0.powf(e) * p.xi.powf(p.xi * e) * (p.xi - 1.0);
        let t_peak = (1.0 - (p.xi * p.x0).powf(e)) / p.mu;
        (y_max, t_peak)
    }
}

/// One row of the xi-sweep (Fig 1-bis style data).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedRateSweepRow {
    pub xi: f64,
    pub x0: f64,
    pub terminal_fraction: f64,
    pub y_max: f64,
    pub t_peak: f64,
    pub tau: f64,
}

/// Tabulate terminal fraction and maximum torrent size over a xi grid.
pub fn sweep_phase_diagram(x0: f64, mu: f64, xi_grid: &[f64]) -> Result<Vec<FixedRateSweepRow>> {
    xi_grid
        .iter()
        .map(|&xi| {
            let p = FixedRateMeanField::new(xi, mu, x0)?;
            let (y_max, t_peak) = max_torrent(&p);
            Ok(FixedRateSweepRow {
                xi,
                x0,
                terminal_fraction: terminal_uninfected_fraction(&p),
                y_max,
                t_peak,
                tau: stop_time(&p),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_endpoints() {
        let p = FixedRateMeanField::new(2.0, 1.0, 0.8).unwrap();
        let (y, x) = scaled_trajectory(&p, 0.0).unwrap();
        assert!((y - 0.2).abs() < 1e-15 && x == 0.8);
        let (y, x) = scaled_trajectory(&p, 1.0).unwrap();
        assert_eq!((y, x), (0.0, 0.0));
        // Also for a sub-unity exponent where the alternative form 0^{xi-1}
        // would blow up.
        let p = FixedRateMeanField::new(0.5, 1.0, 0.8).unwrap();
        let (y, x) = scaled_trajectory(&p, 1.0).unwrap();
        assert!(y == 0.0 && x == 0.0);
    }

    #[test]
    fn trajectory_midpoint_arithmetic() {
        let p = FixedRateMeanField::new(2.0, 1.0, 0.8).unwrap();
        let (y, x) = scaled_trajectory(&p, 0.5).unwrap();
        assert!((x - 0.2).abs() < 1e-15);
        assert!((y - 0.3).abs() < 1e-15);
    }

    #[test]
    fn trajectory_rejects_out_of_range() {
        let p = FixedRateMeanField::new(2.0, 0.5, 0.8).unwrap();
        assert!(matches!(
            scaled_trajectory(&p, 2.1),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(matches!(
            scaled_trajectory(&p, -0.1),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn stop_time_branches() {
        let p = FixedRateMeanField::new(0.5, 1.0, 0.8).unwrap();
        assert!((stop_time(&p) - 0.36).abs() < 1e-15);
        let p = FixedRateMeanField::new(1.5, 2.0, 0.8).unwrap();
        assert_eq!(stop_time(&p), 0.5);
        // Nearly no initial seeds: tau -> 0.
        let p = FixedRateMeanField::new(0.5, 1.0, 1.0 - 1e-9).unwrap();
        assert!(stop_time(&p) < 1e-8);
    }

    #[test]
    fn stop_time_is_first_zero_of_y() {
        for (xi, x0) in [(0.5, 0.8), (0.9, 0.95), (1.3, 0.6)] {
            let p = FixedRateMeanField::new(xi, 1.0, x0).unwrap();
            let tau = stop_time(&p);
            let (y_tau, _) = scaled_trajectory(&p, tau).unwrap();
            assert!(y_tau.abs() < 1e-9, "xi = {xi}: y(tau) = {y_tau}");
            // y stays positive strictly inside (0, tau).
            for i in 1..50 {
                let t = tau * i as f64 / 50.0;
                let (y, _) = scaled_trajectory(&p, t).unwrap();
                assert!(y > 0.0, "xi = {xi}, t = {t}");
            }
        }
    }

    #[test]
    fn terminal_fraction_branches() {
        let p = FixedRateMeanField::new(0.5, 1.0, 0.8).unwrap();
        assert!((terminal_uninfected_fraction(&p) - 0.64).abs() < 1e-15);
        let p = FixedRateMeanField::new(1.0, 1.0, 0.8).unwrap();
        assert_eq!(terminal_uninfected_fraction(&p), 0.0);
        let p = FixedRateMeanField::new(3.0, 1.0, 0.8).unwrap();
        assert_eq!(terminal_uninfected_fraction(&p), 0.0);
        // xi -> 1-: exponent diverges and the fraction vanishes continuously.
        let p = FixedRateMeanField::new(1.0 - 1e-9, 1.0, 0.8).unwrap();
        assert!(terminal_uninfected_fraction(&p) < 1e-12);
    }

    #[test]
    fn terminal_fraction_matches_x_at_tau() {
        let p = FixedRateMeanField::new(0.5, 1.0, 0.8).unwrap();
        let (_, x_tau) = scaled_trajectory(&p, stop_time(&p)).unwrap();
        assert!((terminal_uninfected_fraction(&p) - x_tau).abs() < 1e-12);
    }

    #[test]
    fn max_torrent_boundary_branch() {
        let p = FixedRateMeanField::new(1.2, 1.0, 0.8).unwrap();
        let (y_max, t_peak) = max_torrent(&p);
        assert!((y_max - 0.2).abs() < 1e-15);
        assert_eq!(t_peak, 0.0);
    }

    #[test]
    fn max_torrent_interior_arithmetic() {
        let p = FixedRateMeanField::new(2.0, 1.0, 0.8).unwrap();
        let (y_max, t_peak) = max_torrent(&p);
        assert!((y_max - 0.3125).abs() < 1e-15);
        assert!((t_peak - 0.375).abs() < 1e-15);
        let (y_at_peak, _) = scaled_trajectory(&p, t_peak).unwrap();
        assert!((y_at_peak - y_max).abs() < 1e-15);
    }

    #[test]
    fn max_torrent_continuous_at_kink() {
        for x0 in [0.95, 0.8, 0.5] {
            let xi = 1.0 / x0;
            let p = FixedRateMeanField::new(xi, 1.0, x0).unwrap();
            let (boundary, _) = max_torrent(&p);
            // Evaluate the interior-branch formula at the kink directly.
            let e = 1.0 / (1.0 - xi);
            let interior = x0.powf(e) * xi.powf(xi * e) * (xi - 1.0);
            assert!(
                (interior - (1.0 - x0)).abs() < 1e-9,
                "x0 = {x0}: interior formula {interior}"
            );
            assert!((boundary - (1.0 - x0)).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_has_kink_and_zero_terminal_beyond_one() {
        let grid: Vec<f64> = (1..=60).map(|i| i as f64 * 0.05).collect();
        let rows = sweep_phase_diagram(0.8, 1.0, &grid).unwrap();
        for r in &rows {
            if r.xi >= 1.0 {
                assert_eq!(r.terminal_fraction, 0.0);
            }
            if r.xi <= 1.25 {
                assert!((r.y_max - 0.2).abs() < 1e-12, "xi = {}", r.xi);
            } else {
                assert!(r.y_max > 0.2, "xi = {}", r.xi);
            }
        }
    }
}
