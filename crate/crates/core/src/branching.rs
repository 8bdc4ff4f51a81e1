//! Birth-death branching analytics: extinction probability, extinction-time
//! CDF, expected extinction time, and the survival upper bound carried over
//! to the original swarm process.
//!
//! Each of the `k` initial objects spawns at rate `lambda_nc` and dies at
//! rate `mu`, independently of the others, so k-object quantities are the
//! 1-object quantities raised to the k-th power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::GeneralParams;
use crate::numerics::{adaptive_simpson, bisect};

/// Width of the window around rho = 1 treated as exactly critical.
const CRITICAL_WINDOW: f64 = 1e-9;

/// Parameters of the linear birth-death approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchingParams {
    /// Birth rate per object (lambda * N_c).
    pub lambda_nc: f64,
    /// Death rate per object.
    pub mu: f64,
    /// Initial number of objects.
    pub k: u32,
}

impl BranchingParams {
    pub fn new(lambda_nc: f64, mu: f64, k: u32) -> Result<Self> {
        if !(lambda_nc >= 0.0) || !lambda_nc.is_finite() {
            return Err(Error::InvalidRate(format!(
                "lambda_nc = {lambda_nc} must be >= 0"
            )));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidRate(format!("mu = {mu} must be > 0")));
        }
        if k < 1 {
            return Err(Error::InvalidCounts("k must be >= 1".into()));
        }
        Ok(Self { lambda_nc, mu, k })
    }

    /// Freeze the cooperative pool of a general model at its initial size.
    pub fn from_general(p: &GeneralParams) -> Result<Self> {
        if p.mu() == 0.0 {
            return Err(Error::DivisionByZero("rho"));
        }
        Self::new(p.lambda() * p.nc() as f64, p.mu(), p.y0())
    }

    /// Reproduction ratio rho = lambda_nc / mu.
    pub fn rho(&self) -> f64 {
        self.lambda_nc / self.mu
    }

    /// Same line-of-descent parameters with a different initial count.
    pub fn with_k(&self, k: u32) -> Result<Self> {
        Self::new(self.lambda_nc, self.mu, k)
    }
}

/// Probability that all k lines of descent eventually die out:
/// min(1, 1/rho)^k.
pub fn extinction_probability(p: &BranchingParams) -> f64 {
    let rho = p.rho();
    let q1 = if rho <= 1.0 { 1.0 } else { 1.0 / rho };
    q1.powi(p.k as i32)
}

/// CDF of the single-object extinction time.
///
/// The textbook form (1 - e^{-mu(1-rho)t}) / (1 - rho e^{-mu(1-rho)t}) is
/// 0/0 at rho = 1. Writing s = -expm1(-mu(1-rho)t) turns the denominator
/// into s + (1-rho)e^{-mu(1-rho)t}, a sum of same-signed terms, which keeps
/// the evaluation exact through the critical window; the supercritical
/// branch is rearranged so the exponential argument stays negative.
fn extinction_cdf_single(rho: f64, mu: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if t.is_infinite() {
        return if rho <= 1.0 { 1.0 } else { 1.0 / rho };
    }
    let eps = 1.0 - rho;
    if eps.abs() < CRITICAL_WINDOW {
        let mt = mu * t;
        return mt / (1.0 + mt);
    }
    if rho < 1.0 {
        let u = (-mu * eps * t).exp();
        let s = -(-mu * eps * t).exp_m1();
        s / (s + eps * u)
    } else {
        let d = mu * (rho - 1.0) * t;
        let u = (-d).exp();
        (1.0 - u) / (rho - u)
    }
}

/// CDF of the extinction time of k independent objects, G_k(t) = G_1(t)^k.
pub fn extinction_cdf(p: &BranchingParams, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(extinction_cdf_single(p.rho(), p.mu, t).powi(p.k as i32))
}

/// Upper bound on the survival function of the original process started
/// from k holders: 1 - G_k(t).
pub fn survival_upper_bound(p: &BranchingParams, t: f64) -> Result<f64> {
    Ok(1.0 - extinction_cdf(p, t)?)
}

/// Expected extinction time, defined for rho < 1 only.
///
/// k = 1 has the closed form -ln(1-rho) / (mu rho); larger k integrates the
/// survival function by adaptive quadrature with an analytic tail bound.
pub fn expected_extinction_time(p: &BranchingParams) -> Result<f64> {
    let rho = p.rho();
    if rho >= 1.0 {
        return Err(Error::Supercritical(rho));
    }
    if p.k == 1 {
        // -ln(1-rho)/rho -> 1 as rho -> 0; ln_1p keeps small rho exact.
        let factor = if rho < 1e-8 {
            1.0 + rho / 2.0
        } else {
            -(-rho).ln_1p() / rho
        };
        return Ok(factor / p.mu);
    }
    // 1 - G_k(t) <= k e^{-mu(1-rho)t}, so truncate where that bound
    // reaches 1e-12 and add the integrated bound for the remainder.
    let decay = p.mu * (1.0 - rho);
    let t_cut = (p.k as f64 / 1e-12).ln() / decay;
    let body = adaptive_simpson(
        |t| 1.0 - extinction_cdf_single(rho, p.mu, t).powi(p.k as i32),
        0.0,
        t_cut,
        1e-9,
    );
    let tail = p.k as f64 * (-decay * t_cut).exp() / decay;
    Ok(body + tail)
}

/// Horizon up to which the branching CDF is compared against simulation:
/// the earliest time where G_k reaches 99% of its limiting value q_k.
pub fn plateau_time(p: &BranchingParams) -> Result<f64> {
    let target = 0.99 * extinction_probability(p);
    let g = |t: f64| extinction_cdf_single(p.rho(), p.mu, t).powi(p.k as i32) - target;
    let mut hi = 1.0 / p.mu;
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 / p.mu {
            return Err(Error::BracketFailure { lo: 0.0, hi });
        }
    }
    bisect(g, 0.0, hi, 1e-10 / p.mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(rho: f64, mu: f64, k: u32) -> BranchingParams {
        BranchingParams::new(rho * mu, mu, k).unwrap()
    }

    #[test]
    fn extinction_probability_subcritical_is_one() {
        assert_eq!(extinction_probability(&params(0.8, 1.0, 3)), 1.0);
    }

    #[test]
    fn extinction_probability_fig3_parameters() {
        // rho = 0.006 * 399 / 1
        let p = BranchingParams::new(0.006 * 399.0, 1.0, 1).unwrap();
        assert!((extinction_probability(&p) - 1.0 / 2.394).abs() < 1e-12);
        assert!((extinction_probability(&p) - 0.41771).abs() < 1e-5);
    }

    #[test]
    fn extinction_probability_powers() {
        assert!((extinction_probability(&params(2.0, 1.0, 2)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cdf_at_zero_is_zero() {
        for rho in [0.0, 0.5, 1.0, 2.394] {
            assert_eq!(extinction_cdf(&params(rho, 1.3, 2), 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn cdf_pure_death_reduces_to_exponential() {
        let p = BranchingParams::new(0.0, 0.7, 1).unwrap();
        for t in [0.1f64, 1.0, 5.0] {
            let expect = 1.0 - (-0.7 * t).exp();
            assert!((extinction_cdf(&p, t).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_critical_closed_form() {
        // rho = 1, mu = 1, k = 2, t = 1 -> (1/2)^2
        let v = extinction_cdf(&params(1.0, 1.0, 2), 1.0).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn cdf_rejects_negative_time() {
        assert!(matches!(
            extinction_cdf(&params(0.5, 1.0, 1), -0.1),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn cdf_continuous_across_criticality() {
        // Removable singularity: values just off rho = 1 stay within 1e-4.
        for t in [0.3, 1.0, 4.0, 20.0] {
            let at = extinction_cdf(&params(1.0, 1.0, 1), t).unwrap();
            for drho in [-1e-6, 1e-6, -1e-7, 1e-7] {
                let near = extinction_cdf(&params(1.0 + drho, 1.0, 1), t).unwrap();
                assert!(
                    (near - at).abs() < 1e-4,
                    "t = {t}, drho = {drho}: {near} vs {at}"
                );
            }
        }
    }

    #[test]
    fn cdf_limit_is_extinction_probability() {
        for (rho, k) in [(0.4, 1), (0.9, 2), (1.7, 1), (2.394, 3)] {
            let p = params(rho, 1.0, k);
            let g = extinction_cdf(&p, 1e3).unwrap();
            assert!(
                (g - extinction_probability(&p)).abs() < 1e-6,
                "rho = {rho}, k = {k}"
            );
        }
    }

    #[test]
    fn expected_time_pure_death_limit() {
        let p = BranchingParams::new(1e-12, 1.0, 1).unwrap();
        assert!((expected_extinction_time(&p).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expected_time_closed_form_half() {
        let p = params(0.5, 1.0, 1);
        let expect = (2.0_f64).ln() / 0.5;
        assert!((expected_extinction_time(&p).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn expected_time_rejects_supercritical() {
        assert!(matches!(
            expected_extinction_time(&params(1.0, 1.0, 1)),
            Err(Error::Supercritical(_))
        ));
    }

    #[test]
    fn expected_time_k3_between_1x_and_3x_single() {
        let single = expected_extinction_time(&params(0.5, 1.0, 1)).unwrap();
        let triple = expected_extinction_time(&params(0.5, 1.0, 3)).unwrap();
        assert!(triple > single);
        assert!(triple < 3.0 * single);
    }

    #[test]
    fn survival_bound_endpoints() {
        let p = params(2.394, 1.0, 1);
        assert_eq!(survival_upper_bound(&p, 0.0).unwrap(), 1.0);
        let limit = survival_upper_bound(&p, 1e6).unwrap();
        assert!((limit - (1.0 - 1.0 / 2.394)).abs() < 1e-9);
    }

    #[test]
    fn plateau_time_hits_99_percent() {
        let p = BranchingParams::new(0.006 * 399.0, 1.0, 1).unwrap();
        let tb = plateau_time(&p).unwrap();
        let g = extinction_cdf(&p, tb).unwrap();
        assert!((g - 0.99 * extinction_probability(&p)).abs() < 1e-6);
        assert!(tb > 0.0);
    }
}
