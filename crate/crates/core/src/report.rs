//! Cross-validation suites: each check pins its tolerance and seed, runs
//! simulation against the analytic modules, and reports pass/fail with the
//! measured numbers. The `acceptance` integration test and the CLI `report`
//! command both run these.

use serde::Serialize;

use crate::branching::{
    expected_extinction_time, extinction_cdf, extinction_probability, plateau_time,
    BranchingParams,
};
use crate::control::{delay_curve, optimize_alpha};
use crate::fixed_rate::{
    max_torrent, scaled_trajectory, stop_time, terminal_uninfected_fraction, FixedRateMeanField,
};
use crate::meanfield::{sweep_phase_diagram, MeanFieldParams};
use crate::model::{ControlParams, FixedRateParams, GeneralParams};
use crate::sim::{exact_small_n, run_ensemble, EmpiricalCdf, Model};
use crate::{meanfield, sim};

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self { name: name.into(), passed, detail }
    }
}

/// All checks of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Suites runnable by name, in acceptance order.
pub const SUITES: &[&str] = &[
    "branching_extinction",
    "expected_time_identity",
    "dominance",
    "extinction_cdf",
    "early_mean_extinction",
    "fully_coop_bound",
    "meanfield_accuracy",
    "phase_transition",
    "fixed_rate",
    "small_n_oracle",
    "control_utility",
    "determinism",
];

/// Run one suite by name; `None` for an unknown suite. `"all"` is handled
/// by the caller iterating [`SUITES`].
pub fn run_suite(name: &str) -> Option<SuiteReport> {
    let checks = match name {
        "branching_extinction" => branching_extinction(),
        "expected_time_identity" => expected_time_identity(),
        "dominance" => dominance(),
        "extinction_cdf" => extinction_cdf_agreement(),
        "early_mean_extinction" => early_mean_extinction(),
        "fully_coop_bound" => fully_coop_bound(),
        "meanfield_accuracy" => meanfield_accuracy(),
        "phase_transition" => phase_transition(),
        "fixed_rate" => fixed_rate_checks(),
        "small_n_oracle" => small_n_oracle(),
        "control_utility" => control_utility(),
        "determinism" => determinism(),
        _ => return None,
    };
    Some(SuiteReport { suite: name.to_string(), checks })
}

// ---------------------------------------------------------------------------
// Criterion 1: branching extinction probability vs Monte Carlo.

/// Monte Carlo extinction frequency of the plain birth-death chain. A walk
/// reaching `y_cap` is counted as surviving; the later-extinction
/// probability from there is (1/rho)^y_cap, far below the tolerances used.
pub fn branching_mc_extinction(
    birth: f64,
    death: f64,
    y0: u32,
    replicates: usize,
    master_seed: u64,
) -> f64 {
    use rayon::prelude::*;
    let extinct: usize = (0..replicates)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = crate::rng::rng_for(master_seed, i as u64);
            let (_, y, _) = crate::sim::branching_walk(birth, death, y0, 200, &mut rng);
            y == 0
        })
        .count();
    extinct as f64 / replicates as f64
}

/// Monte Carlo mean extinction time of the birth-death chain (subcritical
/// use only). Returns (mean, standard error).
pub fn branching_mc_mean_time(
    birth: f64,
    death: f64,
    y0: u32,
    replicates: usize,
    master_seed: u64,
) -> (f64, f64) {
    use rayon::prelude::*;
    let times: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = crate::rng::rng_for(master_seed, i as u64);
            let (t, _, _) = crate::sim::branching_walk(birth, death, y0, u32::MAX, &mut rng);
            t
        })
        .collect();
    let n = times.len() as f64;
    let mean = times.iter().sum::<f64>() / n;
    let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn branching_extinction() -> Vec<CheckResult> {
    // rho = 0.006 * 399 = 2.394; q1 = 1/rho.
    let (birth, death) = (0.006 * 399.0, 1.0);
    let rho: f64 = birth / death;
    let q = 1.0 / rho;
    let replicates = 10_000;
    let freq = branching_mc_extinction(birth, death, 1, replicates, 0x5EED_0001);
    let se = (q * (1.0 - q) / replicates as f64).sqrt();
    let tol = 3.0 * se;
    vec![CheckResult::new(
        "branching extinction frequency vs 1/rho (rho = 2.394)",
        (freq - q).abs() <= tol,
        format!("freq = {freq:.4}, 1/rho = {q:.4}, tol = {tol:.4}"),
    )]
}

// ---------------------------------------------------------------------------
// Criterion 2: expected extinction time closed form vs quadrature.

fn expected_time_identity() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for rho in [0.2, 0.5, 0.9] {
        let p = BranchingParams::new(rho, 1.0, 1).unwrap();
        let closed = expected_extinction_time(&p).unwrap();
        // Independent route: trapezoid refinement of int (1 - G_1) dt with
        // the analytic exponential tail.
        let decay = 1.0 - rho;
        let t_cut = (1e13_f64).ln() / decay;
        let numeric = trapezoid_survival(&p, t_cut, 1 << 21) + (-decay * t_cut).exp() / decay;
        let rel = (closed - numeric).abs() / closed;
        out.push(CheckResult::new(
            format!("closed form vs numeric integral, rho = {rho}"),
            rel <= 1e-6,
            format!("closed = {closed:.9}, numeric = {numeric:.9}, rel = {rel:.2e}"),
        ));
    }
    out
}

fn trapezoid_survival(p: &BranchingParams, t_end: f64, n: usize) -> f64 {
    let h = t_end / n as f64;
    let f = |t: f64| 1.0 - extinction_cdf(p, t).unwrap();
    let mut acc = 0.5 * (f(0.0) + f(t_end));
    for i in 1..n {
        acc += f(i as f64 * h);
    }
    acc * h
}

// ---------------------------------------------------------------------------
// Criterion 3: stochastic dominance of the branching survival function.

fn dominance() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let replicates = 1000;
    for (y0, r) in [(1u32, 1.0f64), (1, 0.6), (3, 1.0), (3, 0.6)] {
        let nc = ((400.0 * r) as u32) - y0;
        let nf = 400 - y0 - nc;
        let p = GeneralParams::new(400, 0.006, 1.0, y0, nc, nf).unwrap();
        let b = BranchingParams::from_general(&p).unwrap();
        let ens = run_ensemble(&Model::General(p), 0x5EED_0003 + y0 as u64, replicates, 50.0);
        let cdf = EmpiricalCdf::from_samples(ens.extinction_times()).unwrap();
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut failed_at = None;
        for i in 0..50 {
            let t = 50.0 * i as f64 / 49.0;
            let g = extinction_cdf(&b, t).unwrap();
            let surv_bound = 1.0 - g;
            let se = (g * (1.0 - g) / replicates as f64).sqrt();
            let emp_surv = 1.0 - cdf.eval(t);
            let slack = emp_surv - (surv_bound + 3.0 * se);
            if slack > worst {
                worst = slack;
                if slack > 0.0 {
                    failed_at = Some(t);
                }
            }
        }
        out.push(CheckResult::new(
            format!("empirical survival below branching bound, Y0 = {y0}, r = {r}"),
            failed_at.is_none(),
            format!("max slack over grid = {worst:.4} (<= 0 passes)"),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 4: early-extinction CDF agreement and the late rise.

fn extinction_cdf_agreement() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let replicates = 1000;
    for (y0, r) in [(1u32, 1.0f64), (1, 0.6), (3, 1.0), (3, 0.6)] {
        let nc = ((400.0 * r) as u32) - y0;
        let nf = 400 - y0 - nc;
        let p = GeneralParams::new(400, 0.006, 1.0, y0, nc, nf).unwrap();
        let b = BranchingParams::from_general(&p).unwrap();
        let t_b = plateau_time(&b).unwrap();
        let ens = run_ensemble(&Model::General(p), 0x5EED_0004 + y0 as u64, replicates, 50.0);
        let cdf = EmpiricalCdf::from_samples(ens.extinction_times()).unwrap();
        let grid: Vec<f64> = (0..=100).map(|i| t_b * i as f64 / 100.0).collect();
        let sup = cdf.sup_distance_on_grid(|t| extinction_cdf(&b, t).unwrap(), &grid);
        out.push(CheckResult::new(
            format!("sup |empirical - G| on [0, T_B], Y0 = {y0}, r = {r}"),
            sup <= 0.05,
            format!("sup distance = {sup:.4}, T_B = {t_b:.2}"),
        ));
        if (r - 1.0).abs() < 1e-12 {
            let plateau = extinction_probability(&b);
            let late = cdf.eval(50.0);
            out.push(CheckResult::new(
                format!("late-extinction rise after plateau, Y0 = {y0}, r = {r}"),
                late >= plateau + 0.3,
                format!("CDF(t_max) = {late:.3}, plateau q = {plateau:.3}"),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 5: early mean extinction time vs lambda on a subcritical grid.

fn early_mean_extinction() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let replicates = 2000;
    for k in [1u32, 3] {
        for rho_target in [0.2, 0.5, 0.8] {
            let nc = 400 - k;
            let lambda = rho_target / nc as f64;
            let p = GeneralParams::new(400, lambda, 1.0, k, nc, 0).unwrap();
            let b = BranchingParams::from_general(&p).unwrap();
            let expect = expected_extinction_time(&b).unwrap();
            let ens = run_ensemble(
                &Model::General(p),
                0x5EED_0005 + k as u64 * 100 + (rho_target * 10.0) as u64,
                replicates,
                1e6,
            );
            let (mean, se) = ens.mean_se(|r| r.extinction_time);
            let diff = (mean - expect).abs();
            out.push(CheckResult::new(
                format!("early mean extinction, k = {k}, rho = {rho_target}"),
                diff <= 3.0 * se,
                format!("MC mean = {mean:.4} +- {se:.4}, E[T_b] = {expect:.4}"),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 6: fully cooperative mean-field upper bound.

fn fully_coop_bound() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let replicates = 500;
    for beta in [1.0, 2.0] {
        for y0_frac in [0.05, 0.1] {
            let n = 300u32;
            let y0 = (y0_frac * n as f64).round() as u32;
            let p = GeneralParams::new(n, beta / n as f64, 0.0, y0, n - y0, 0).unwrap();
            let grid: Vec<f64> = (0..=20).map(|i| 12.0 * i as f64 / 20.0 / beta).collect();
            let stats = sim::mean_y_on_grid(
                &Model::FullyCooperative(p),
                0x5EED_0006 + beta as u64,
                replicates,
                f64::INFINITY,
                &grid,
            );
            let mut worst: f64 = f64::NEG_INFINITY;
            for s in &stats {
                let bound = n as f64 * meanfield::fully_coop_closed_form(beta, y0_frac, s.t);
                worst = worst.max(s.mean - (bound + 3.0 * s.std_err));
            }
            out.push(CheckResult::new(
                format!("E[Y(t)] <= N y(t), beta = {beta}, y0 = {y0_frac}"),
                worst <= 0.0,
                format!("max excess over bound = {worst:.3} (<= 0 passes)"),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 7: mean-field terminal accuracy against conditioned simulation.

/// Mean final uninfected fraction over late-survival replicates. For
/// supercritical parameters a replicate is late-surviving when its
/// extinction time exceeds the branching plateau horizon T_B; for
/// subcritical parameters every replicate counts.
pub fn conditioned_final_fraction(
    p: &GeneralParams,
    master_seed: u64,
    replicates: usize,
) -> Option<(f64, usize)> {
    let b = BranchingParams::from_general(p).ok()?;
    let rho = b.rho();
    let ens = run_ensemble(&Model::General(*p), master_seed, replicates, 1e9);
    let keep = |rec: &&crate::sim::ReplicateRecord| {
        if rho <= 1.0 {
            true
        } else {
            rec.extinction_time > plateau_time(&b).unwrap()
        }
    };
    let kept: Vec<f64> = ens
        .records
        .iter()
        .filter(keep)
        .map(|r| (r.final_xc + r.final_xf) as f64 / p.n_total() as f64)
        .collect();
    if kept.is_empty() {
        return None;
    }
    Some((kept.iter().sum::<f64>() / kept.len() as f64, kept.len()))
}

fn meanfield_accuracy() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let n = 300u32;
    let y0 = 10u32;
    let replicates = 500;
    for (r, tol) in [(1.0, 0.03), (0.5, 0.08)] {
        let nc = ((n as f64 * r) as u32) - y0;
        let nf = n - y0 - nc;
        let xc0 = nc as f64 / n as f64;
        // Five lambdas straddling the transition theta xc0 = 1.
        let lambda_star = 1.0 / (n as f64 * xc0);
        for factor in [0.6, 0.85, 1.15, 1.6, 2.4] {
            let lambda = factor * lambda_star;
            let p = GeneralParams::new(n, lambda, 1.0, y0, nc, nf).unwrap();
            let mf = MeanFieldParams::from_general(&p).unwrap();
            let (xc_inf, xf_inf) = meanfield::terminal_uninfected(&mf).unwrap();
            let predicted = xc_inf + xf_inf;
            let seed = 0x5EED_0007 + (r * 10.0) as u64 * 1000 + (factor * 100.0) as u64;
            let (measured, kept) = conditioned_final_fraction(&p, seed, replicates)
                .expect("some late-survival replicates");
            let rel = (measured - predicted).abs() / predicted;
            out.push(CheckResult::new(
                format!("terminal fraction, r = {r}, theta*xc0 = {factor}"),
                rel <= tol,
                format!(
                    "sim = {measured:.4} ({kept} runs), mean-field = {predicted:.4}, rel = {rel:.3} (tol {tol})"
                ),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 8: phase transition of the terminal fraction at theta xc0 = 1.

fn phase_transition() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let y0 = 0.05;
    let grid: Vec<f64> = (0..=40)
        .map(|i| 0.1 * 10.0_f64.powf(3.0 * i as f64 / 40.0))
        .collect();
    for xc0 in [0.01, 0.1, 0.3, 0.5, 0.9] {
        let rows = sweep_phase_diagram(y0, xc0, 1.0, &grid).unwrap();
        let monotone = rows.windows(2).all(|w| w[1].xc_inf <= w[0].xc_inf + 1e-12);
        let low_end = rows.first().unwrap().xc_inf / xc0;
        let high_end = rows.last().unwrap().xc_inf / xc0;
        out.push(CheckResult::new(
            format!("x_c^min curve monotone and pinned, xc0 = {xc0}"),
            monotone && low_end >= 0.5 && high_end <= 0.05,
            format!(
                "monotone = {monotone}, ratio at theta*xc0 = 0.1: {low_end:.3}, at 100: {high_end:.3e}"
            ),
        ));
        // Root solve cross-checked against the integrated ODE mid-sweep.
        let theta = 2.0 / xc0;
        let p = MeanFieldParams::new(theta, 1.0, y0, xc0, 1.0 - y0 - xc0).unwrap();
        let (xc_inf, _) = meanfield::terminal_uninfected(&p).unwrap();
        let path = meanfield::integrate_ode(&p, 2000.0, 4001).unwrap();
        let ode = path.last().unwrap().xc;
        out.push(CheckResult::new(
            format!("root solve vs ODE terminal, xc0 = {xc0}"),
            (xc_inf - ode).abs() <= 1e-3,
            format!("root = {xc_inf:.6}, ode = {ode:.6}"),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 9: fixed-rate phase transitions.

fn fixed_rate_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let n = 10_000u32;
    let x0 = 0.8;
    let replicates = 200;
    for (xi, tol) in [(0.3, 0.02), (0.5, 0.02), (0.8, 0.02), (1.5, 0.005), (3.0, 0.005)] {
        let p = FixedRateParams::new(n, xi, 1.0, (n as f64 * (1.0 - x0)) as u32).unwrap();
        let mf = FixedRateMeanField::from_params(&p).unwrap();
        let predicted = terminal_uninfected_fraction(&mf);
        let ens = run_ensemble(
            &Model::FixedRate(p),
            0x5EED_0009 + (xi * 10.0) as u64,
            replicates,
            1e9,
        );
        let (mean, _) = ens.mean_se(|r| r.final_xc as f64 / n as f64);
        let diff = (mean - predicted).abs();
        out.push(CheckResult::new(
            format!("terminal fraction vs simulation, xi = {xi}"),
            diff <= tol,
            format!("sim = {mean:.4}, closed form = {predicted:.4}, |diff| = {diff:.4} (tol {tol})"),
        ));
    }
    // y_max formula vs numeric trajectory maximum.
    let mut worst = 0.0_f64;
    for &x0 in &[0.95, 0.8, 0.6, 0.4] {
        for i in 1..=40 {
            let xi = 0.2 * i as f64;
            let p = FixedRateMeanField::new(xi, 1.0, x0).unwrap();
            let (y_max, _) = max_torrent(&p);
            let numeric = numeric_max_torrent(&p);
            worst = worst.max((y_max - numeric).abs());
        }
    }
    out.push(CheckResult::new(
        "y_max formula vs numeric trajectory maximum",
        worst <= 1e-6,
        format!("max |formula - numeric| = {worst:.2e}"),
    ));
    // Continuity at the kink xi = 1/x0.
    let mut worst = 0.0_f64;
    for &x0 in &[0.95f64, 0.8, 0.5] {
        let xi = 1.0 / x0;
        let e = 1.0 / (1.0 - xi);
        let interior = x0.powf(e) * xi.powf(xi * e) * (xi - 1.0);
        worst = worst.max((interior - (1.0 - x0)).abs());
    }
    out.push(CheckResult::new(
        "continuity of y_max at xi = 1/x0",
        worst <= 1e-9,
        format!("max |interior branch - (1 - x0)| = {worst:.2e}"),
    ));
    out
}

fn numeric_max_torrent(p: &FixedRateMeanField) -> f64 {
    let tau = stop_time(p);
    let y_at = |t: f64| scaled_trajectory(p, t).unwrap().0;
    let mut best_t = 0.0;
    let mut best = y_at(0.0);
    for i in 1..=2000 {
        let t = tau * i as f64 / 2000.0;
        let v = y_at(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let lo = (best_t - tau / 2000.0).max(0.0);
    let hi = (best_t + tau / 2000.0).min(tau);
    crate::numerics::golden_section_max(y_at, lo, hi, 1e-12).1
}

// ---------------------------------------------------------------------------
// Criterion 10: exact small-N oracle vs Monte Carlo.

fn small_n_oracle() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let replicates = 100_000;
    for n in [3u32, 4, 5] {
        let nf = 1u32;
        let nc = n - 1 - nf;
        let p = GeneralParams::new(n, 1.0, 1.0, 1, nc, nf).unwrap();
        let grid: Vec<f64> = (1..=10).map(|i| i as f64 * 0.4).collect();
        let exact = exact_small_n(&p, &grid).unwrap();
        let ens = run_ensemble(&Model::General(p), 0x5EED_0010 + n as u64, replicates, 1e9);

        // Terminal distribution.
        let mut worst = 0.0_f64;
        let mut ok = true;
        for outcome in &exact.terminal {
            let hits = ens
                .records
                .iter()
                .filter(|r| r.final_xc == outcome.xc && r.final_xf == outcome.xf)
                .count();
            let freq = hits as f64 / replicates as f64;
            let se = (outcome.probability * (1.0 - outcome.probability) / replicates as f64)
                .sqrt();
            let slack = (freq - outcome.probability).abs() - 3.0 * se;
            worst = worst.max(slack);
            ok &= slack <= 0.0;
        }
        out.push(CheckResult::new(
            format!("terminal distribution vs MC, N = {n}"),
            ok,
            format!("max |freq - p| - 3se = {worst:.2e} (<= 0 passes)"),
        ));

        // Extinction CDF on the grid.
        let cdf = EmpiricalCdf::from_samples(ens.extinction_times()).unwrap();
        let mut worst = 0.0_f64;
        let mut ok = true;
        for &(t, f_exact) in &exact.extinction_cdf {
            let se = (f_exact * (1.0 - f_exact) / replicates as f64).sqrt();
            let slack = (cdf.eval(t) - f_exact).abs() - 3.0 * se;
            worst = worst.max(slack);
            ok &= slack <= 0.0;
        }
        out.push(CheckResult::new(
            format!("extinction CDF vs MC, N = {n}"),
            ok,
            format!("max |F_mc - F| - 3se = {worst:.2e} (<= 0 passes)"),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 11: control problem properties at the Fig 9 preset.

/// Preset used where the source figure leaves beta and mu unstated.
pub fn fig9_preset() -> ControlParams {
    ControlParams::new(500, 2.0, 0.5, 0.0, 2.0 / 500.0, 0.0, 498.0 / 500.0).unwrap()
}

fn control_utility() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let template = fig9_preset();
    let alphas: Vec<f64> = (0..=48).map(|i| 0.25 * i as f64).collect();
    let curve = delay_curve(&template, &alphas).unwrap();

    let lo = 1.0 / template.beta();
    let hi = 1.0 / (template.beta() * template.y_star());
    let bounds_ok = curve
        .t_bars
        .iter()
        .all(|&t| t >= lo - 1e-9 && t <= hi + 1e-9);
    out.push(CheckResult::new(
        "1/beta <= T-bar(alpha) <= 1/(beta y*) on the grid",
        bounds_ok,
        format!(
            "T-bar range [{:.3}, {:.3}] within [{lo:.3}, {hi:.3}]",
            curve.t_bars.iter().cloned().fold(f64::INFINITY, f64::min),
            curve.t_bars.iter().cloned().fold(0.0, f64::max)
        ),
    ));

    let result = optimize_alpha(&template, 0.0, 12.0);
    match result {
        Ok((a_star, h_star)) => {
            let ratio = template.beta() / template.mu_at(a_star);
            out.push(CheckResult::new(
                "h(alpha) has an interior maximum",
                true,
                format!("alpha* = {a_star:.4}, h* = {h_star:.4}"),
            ));
            out.push(CheckResult::new(
                "beta / mu(alpha*) within [1.5, 3.5]",
                (1.5..=3.5).contains(&ratio),
                format!("beta/mu(alpha*) = {ratio:.3}"),
            ));
        }
        Err(e) => {
            out.push(CheckResult::new(
                "h(alpha) has an interior maximum",
                false,
                format!("optimizer: {e}"),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 12: deterministic reruns (core machinery level; the CLI test
// re-checks it on whole figure presets).

fn determinism() -> Vec<CheckResult> {
    let p = GeneralParams::new(400, 0.006, 1.0, 1, 399, 0).unwrap();
    let a = run_ensemble(&Model::General(p), 2024, 200, 50.0).to_csv();
    let b = run_ensemble(&Model::General(p), 2024, 200, 50.0).to_csv();
    vec![CheckResult::new(
        "ensemble rerun with same master seed is byte-identical",
        a == b,
        format!("{} bytes compared", a.len()),
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope").is_none());
    }

    #[test]
    fn suite_list_is_runnable() {
        // Smoke-only: the quick suites run end to end here; the heavy ones
        // are exercised by the acceptance test target.
        for name in ["determinism", "expected_time_identity"] {
            let rep = run_suite(name).unwrap();
            assert!(!rep.checks.is_empty());
        }
    }
}
