//! Shared domain types: validated parameter sets and instantaneous states
//! for the three swarm models.
//!
//! Parameter containers are immutable after validation; construct them with
//! the `new` constructors (or deserialize, which routes through the same
//! checks) and read fields through accessors. Counts are exact integers,
//! fractions are `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for fraction sums that must equal one.
const FRACTION_SUM_TOL: f64 = 1e-9;

/// Parameters of the free-rider epidemic CTMC.
///
/// A population of `n_total` peers: `y0` hold the file initially, `nc`
/// cooperative peers and `nf` free riders do not. Pairwise contacts fire at
/// rate `lambda`; cooperative holders depart at rate `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeneralParamsRaw")]
pub struct GeneralParams {
    n_total: u32,
    lambda: f64,
    mu: f64,
    y0: u32,
    nc: u32,
    nf: u32,
}

#[derive(Deserialize)]
struct GeneralParamsRaw {
    n_total: u32,
    lambda: f64,
    mu: f64,
    y0: u32,
    nc: u32,
    nf: u32,
}

impl TryFrom<GeneralParamsRaw> for GeneralParams {
    type Error = Error;
    fn try_from(r: GeneralParamsRaw) -> Result<Self> {
        GeneralParams::new(r.n_total, r.lambda, r.mu, r.y0, r.nc, r.nf)
    }
}

impl GeneralParams {
    pub fn new(n_total: u32, lambda: f64, mu: f64, y0: u32, nc: u32, nf: u32) -> Result<Self> {
        if y0 as u64 + nc as u64 + nf as u64 != n_total as u64 {
            return Err(Error::InvalidCounts(format!(
                "y0 + nc + nf = {} but n_total = {}",
                y0 as u64 + nc as u64 + nf as u64,
                n_total
            )));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidRate(format!("lambda = {lambda} must be > 0")));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidRate(format!("mu = {mu} must be >= 0")));
        }
        // mu = 0 is the fully cooperative mode; free riders require mu > 0.
        if mu == 0.0 && nf > 0 {
            return Err(Error::InvalidRate(format!(
                "mu = 0 requires nf = 0, got nf = {nf}"
            )));
        }
        Ok(Self { n_total, lambda, mu, y0, nc, nf })
    }

    /// Validation is idempotent: a valid container re-validates to itself.
    pub fn validate(self) -> Result<Self> {
        Self::new(self.n_total, self.lambda, self.mu, self.y0, self.nc, self.nf)
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn y0(&self) -> u32 {
        self.y0
    }
    pub fn nc(&self) -> u32 {
        self.nc
    }
    pub fn nf(&self) -> u32 {
        self.nf
    }

    /// Branching reproduction ratio rho = lambda * nc / mu.
    pub fn rho(&self) -> Result<f64> {
        if self.mu == 0.0 {
            return Err(Error::DivisionByZero("rho"));
        }
        Ok(self.lambda * self.nc as f64 / self.mu)
    }

    /// Scaled contact rate beta = lambda * N.
    pub fn beta(&self) -> f64 {
        self.lambda * self.n_total as f64
    }

    /// Dimensionless ratio theta = beta / mu.
    pub fn theta(&self) -> Result<f64> {
        if self.mu == 0.0 {
            return Err(Error::DivisionByZero("theta"));
        }
        Ok(self.beta() / self.mu)
    }

    /// All three derived quantities at once: (rho, beta, theta).
    pub fn derived_quantities(&self) -> Result<(f64, f64, f64)> {
        Ok((self.rho()?, self.beta(), self.theta()?))
    }
}

/// Instantaneous counts of the general model: `y` holders, `xc` cooperative
/// peers without the file, `xf` free riders without the file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralState {
    pub t: f64,
    pub y: u32,
    pub xc: u32,
    pub xf: u32,
}

/// Parameters of the per-node request-rate CTMC: each peer without the file
/// requests at rate `lambda` from a uniformly chosen peer; holders depart at
/// rate `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FixedRateParamsRaw")]
pub struct FixedRateParams {
    n_total: u32,
    lambda: f64,
    mu: f64,
    y0: u32,
}

#[derive(Deserialize)]
struct FixedRateParamsRaw {
    n_total: u32,
    lambda: f64,
    mu: f64,
    y0: u32,
}

impl TryFrom<FixedRateParamsRaw> for FixedRateParams {
    type Error = Error;
    fn try_from(r: FixedRateParamsRaw) -> Result<Self> {
        FixedRateParams::new(r.n_total, r.lambda, r.mu, r.y0)
    }
}

impl FixedRateParams {
    pub fn new(n_total: u32, lambda: f64, mu: f64, y0: u32) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidRate(format!("lambda = {lambda} must be > 0")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidRate(format!("mu = {mu} must be > 0")));
        }
        if y0 < 1 || y0 > n_total {
            return Err(Error::InvalidCounts(format!(
                "y0 = {y0} must satisfy 1 <= y0 <= {n_total}"
            )));
        }
        Ok(Self { n_total, lambda, mu, y0 })
    }

    pub fn validate(self) -> Result<Self> {
        Self::new(self.n_total, self.lambda, self.mu, self.y0)
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn y0(&self) -> u32 {
        self.y0
    }

    /// Dimensionless ratio xi = lambda / mu.
    pub fn xi(&self) -> f64 {
        self.lambda / self.mu
    }
}

/// Instantaneous counts of the fixed-rate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedRateState {
    pub t: f64,
    pub y: u32,
    pub x: u32,
}

/// Content-owner investment problem inputs.
///
/// A fraction `y_star` of the population are permanent publishers. The
/// non-permanent peers start as `y0` holders and `x0` without the file
/// (fractions of N). Investment `alpha` raises the departure rate to
/// `mu(alpha)`, by default `mu_base * alpha`; an optional tabulated schedule
/// overrides the linear form. `cost_scale` converts investment into the
/// utility's time unit (default 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ControlParamsRaw")]
pub struct ControlParams {
    n_total: u32,
    beta: f64,
    mu_base: f64,
    alpha: f64,
    y_star: f64,
    y0: f64,
    x0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_table: Option<Vec<(f64, f64)>>,
    cost_scale: f64,
}

#[derive(Deserialize)]
struct ControlParamsRaw {
    n_total: u32,
    beta: f64,
    mu_base: f64,
    alpha: f64,
    y_star: f64,
    y0: f64,
    x0: f64,
    #[serde(default)]
    mu_table: Option<Vec<(f64, f64)>>,
    #[serde(default = "default_cost_scale")]
    cost_scale: f64,
}

fn default_cost_scale() -> f64 {
    1.0
}

impl TryFrom<ControlParamsRaw> for ControlParams {
    type Error = Error;
    fn try_from(r: ControlParamsRaw) -> Result<Self> {
        let mut p = ControlParams::new(r.n_total, r.beta, r.mu_base, r.alpha, r.y_star, r.y0, r.x0)?;
        if let Some(table) = r.mu_table {
            p = p.with_mu_table(table)?;
        }
        p.cost_scale = r.cost_scale;
        Ok(p)
    }
}

impl ControlParams {
    pub fn new(
        n_total: u32,
        beta: f64,
        mu_base: f64,
        alpha: f64,
        y_star: f64,
        y0: f64,
        x0: f64,
    ) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidRate(format!("beta = {beta} must be > 0")));
        }
        if !(mu_base >= 0.0) || !mu_base.is_finite() {
            return Err(Error::InvalidRate(format!("mu_base = {mu_base} must be >= 0")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidRate(format!("alpha = {alpha} must be >= 0")));
        }
        if !(y_star > 0.0) {
            return Err(Error::InvalidFractions(format!(
                "y_star = {y_star} must be > 0"
            )));
        }
        if !(y0 >= 0.0) || !(x0 >= 0.0) {
            return Err(Error::InvalidFractions(format!(
                "y0 = {y0}, x0 = {x0} must be non-negative"
            )));
        }
        if (y0 + x0 + y_star - 1.0).abs() > FRACTION_SUM_TOL {
            return Err(Error::InvalidFractions(format!(
                "y0 + x0 + y_star = {} != 1",
                y0 + x0 + y_star
            )));
        }
        Ok(Self {
            n_total,
            beta,
            mu_base,
            alpha,
            y_star,
            y0,
            x0,
            mu_table: None,
            cost_scale: 1.0,
        })
    }

    pub fn validate(self) -> Result<Self> {
        let mut p = Self::new(
            self.n_total,
            self.beta,
            self.mu_base,
            self.alpha,
            self.y_star,
            self.y0,
            self.x0,
        )?;
        p.mu_table = self.mu_table;
        p.cost_scale = self.cost_scale;
        Ok(p)
    }

    /// Replace the linear cost response by a tabulated non-decreasing
    /// `mu(alpha)`, interpolated piecewise-linearly between knots.
    pub fn with_mu_table(mut self, table: Vec<(f64, f64)>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidRate("empty mu(alpha) table".into()));
        }
        for w in table.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidRate("mu table alphas must increase".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidRate("mu(alpha) must be non-decreasing".into()));
            }
        }
        if table.iter().any(|&(a, m)| a < 0.0 || m < 0.0) {
            return Err(Error::InvalidRate("mu table entries must be >= 0".into()));
        }
        self.mu_table = Some(table);
        Ok(self)
    }

    pub fn with_cost_scale(mut self, cost_scale: f64) -> Self {
        self.cost_scale = cost_scale;
        self
    }

    /// Same parameters at a different investment level.
    pub fn at_alpha(&self, alpha: f64) -> Result<Self> {
        let mut p = self.clone();
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidRate(format!("alpha = {alpha} must be >= 0")));
        }
        p.alpha = alpha;
        Ok(p)
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu_base(&self) -> f64 {
        self.mu_base
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn y_star(&self) -> f64 {
        self.y_star
    }
    pub fn y0(&self) -> f64 {
        self.y0
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn cost_scale(&self) -> f64 {
        self.cost_scale
    }

    /// Departure rate at the configured investment level.
    pub fn mu_of_alpha(&self) -> f64 {
        self.mu_at(self.alpha)
    }

    /// Departure rate at an arbitrary investment level.
    pub fn mu_at(&self, alpha: f64) -> f64 {
        match &self.mu_table {
            None => self.mu_base * alpha,
            Some(table) => {
                let first = table[0];
                let last = table[table.len() - 1];
                if alpha <= first.0 {
                    return first.1;
                }
                if alpha >= last.0 {
                    return last.1;
                }
                let idx = table.partition_point(|&(a, _)| a <= alpha);
                let (a0, m0) = table[idx - 1];
                let (a1, m1) = table[idx];
                m0 + (m1 - m0) * (alpha - a0) / (a1 - a0)
            }
        }
    }
}

/// Fractional state evolved by the mean-field ODE systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldState {
    pub t: f64,
    pub y: f64,
    pub xc: f64,
    pub xf: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_params_fig3_r1_valid() {
        let p = GeneralParams::new(400, 0.006, 1.0, 1, 399, 0).unwrap();
        let (rho, beta, theta) = p.derived_quantities().unwrap();
        assert!((rho - 2.394).abs() < 1e-12);
        assert!((beta - 2.4).abs() < 1e-12);
        assert!((theta - 2.4).abs() < 1e-12);
    }

    #[test]
    fn general_params_fig3_r06_valid() {
        let p = GeneralParams::new(400, 0.006, 1.0, 1, 239, 160).unwrap();
        assert!((p.rho().unwrap() - 1.434).abs() < 1e-12);
    }

    #[test]
    fn general_params_count_mismatch() {
        let err = GeneralParams::new(10, 0.1, 1.0, 1, 5, 5).unwrap_err();
        assert!(matches!(err, Error::InvalidCounts(_)));
    }

    #[test]
    fn general_params_mu_zero_with_free_riders() {
        let err = GeneralParams::new(10, 0.1, 0.0, 1, 4, 5).unwrap_err();
        assert!(matches!(err, Error::InvalidRate(_)));
    }

    #[test]
    fn general_params_mu_zero_fully_cooperative_ok() {
        let p = GeneralParams::new(10, 0.1, 0.0, 1, 9, 0).unwrap();
        assert!(matches!(p.rho(), Err(Error::DivisionByZero("rho"))));
        assert!(matches!(p.theta(), Err(Error::DivisionByZero("theta"))));
    }

    #[test]
    fn derived_quantities_zero_cooperative() {
        let p = GeneralParams::new(100, 0.01, 1.0, 1, 0, 99).unwrap();
        assert_eq!(p.rho().unwrap(), 0.0);
    }

    #[test]
    fn derived_quantities_arithmetic() {
        let p = GeneralParams::new(300, 0.005, 0.5, 10, 140, 150).unwrap();
        let (rho, beta, theta) = p.derived_quantities().unwrap();
        assert!((rho - 1.4).abs() < 1e-12);
        assert!((beta - 1.5).abs() < 1e-12);
        assert!((theta - 3.0).abs() < 1e-12);
    }

    #[test]
    fn validate_is_idempotent() {
        let p = GeneralParams::new(400, 0.006, 1.0, 1, 399, 0).unwrap();
        assert_eq!(p.validate().unwrap(), p);
    }

    #[test]
    fn rho_equals_theta_times_coop_share() {
        // Algebraic identity linking the branching and mean-field ratios.
        for (n, nc) in [(400u32, 399u32), (300, 140), (50, 25)] {
            let p = GeneralParams::new(n, 0.004, 0.7, 1, nc, n - nc - 1).unwrap();
            let lhs = p.rho().unwrap();
            let rhs = p.theta().unwrap() * (nc as f64 / n as f64);
            assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1.0));
        }
    }

    #[test]
    fn fixed_rate_params_xi() {
        let p = FixedRateParams::new(10_000, 0.5, 1.0, 2000).unwrap();
        assert!((p.xi() - 0.5).abs() < 1e-15);
        assert!(FixedRateParams::new(10, 0.5, 1.0, 0).is_err());
        assert!(FixedRateParams::new(10, 0.5, 1.0, 11).is_err());
        assert!(FixedRateParams::new(10, 0.5, 0.0, 1).is_err());
    }

    #[test]
    fn control_params_fractions_must_sum() {
        let err = ControlParams::new(500, 2.0, 0.5, 1.0, 0.004, 0.1, 0.8).unwrap_err();
        assert!(matches!(err, Error::InvalidFractions(_)));
        let err = ControlParams::new(500, 2.0, 0.5, 1.0, 0.0, 0.1, 0.9).unwrap_err();
        assert!(matches!(err, Error::InvalidFractions(_)));
        assert!(ControlParams::new(500, 2.0, 0.5, 1.0, 0.004, 0.0, 0.996).is_ok());
    }

    #[test]
    fn control_mu_linear_and_table() {
        let p = ControlParams::new(500, 2.0, 0.5, 3.0, 0.004, 0.0, 0.996).unwrap();
        assert!((p.mu_of_alpha() - 1.5).abs() < 1e-15);
        let p = p
            .with_mu_table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)])
            .unwrap();
        assert!((p.mu_at(0.5) - 0.5).abs() < 1e-15);
        assert!((p.mu_at(1.5) - 1.25).abs() < 1e-15);
        assert!((p.mu_at(5.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn params_json_round_trip_with_validation() {
        let p = GeneralParams::new(400, 0.006, 1.0, 1, 399, 0).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"n_total\":400"));
        let back: GeneralParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);

        // Deserialization routes through validation.
        let bad = r#"{"n_total":10,"lambda":0.1,"mu":1.0,"y0":1,"nc":5,"nf":5}"#;
        assert!(serde_json::from_str::<GeneralParams>(bad).is_err());
    }
}
