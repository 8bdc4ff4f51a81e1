//! Runners for the experiment kinds: each executes simulations and/or
//! analytics, writes plot-ready CSV plus a JSON sidecar, and embeds the
//! cross-checks that make sense for that experiment.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use swarm_core::branching::{
    expected_extinction_time, extinction_cdf, plateau_time,
    BranchingParams,
};
use swarm_core::control::delay_curve;
use swarm_core::meanfield::{self, MeanFieldParams};
use swarm_core::model::{ControlParams, GeneralParams};
use swarm_core::report::conditioned_final_fraction;
use swarm_core::rng::child_seed;
use swarm_core::sim::{
    exact_small_n, run_ensemble, simulate_hybrid, EmpiricalCdf, HybridOutcome, Model,
};
use swarm_core::{fixed_rate, Error};

use crate::config::{write_csv, ExperimentConfig, ExperimentKind, Sidecar, SidecarCheck};

/// Execute one experiment; the returned sidecar carries outputs and
/// embedded check results.
pub fn run(cfg: &ExperimentConfig, stem: &str) -> Result<Sidecar> {
    let mut sidecar = Sidecar::for_experiment(cfg);
    match cfg.kind {
        ExperimentKind::ExtinctionCdf => extinction_cdf_run(cfg, stem, &mut sidecar)?,
        ExperimentKind::EarlyExtinctionMean => early_extinction_mean(cfg, stem, &mut sidecar)?,
        ExperimentKind::TerminalFraction => terminal_fraction(cfg, stem, &mut sidecar)?,
        ExperimentKind::PhaseSweep => phase_sweep(cfg, stem, &mut sidecar)?,
        ExperimentKind::FixedRateSweep => fixed_rate_sweep(cfg, stem, &mut sidecar)?,
        ExperimentKind::ControlUtility => control_utility(cfg, stem, &mut sidecar)?,
        ExperimentKind::Hybrid => hybrid(cfg, stem, &mut sidecar)?,
        ExperimentKind::OracleCheck => oracle_check(cfg, stem, &mut sidecar)?,
    }
    sidecar.write(&cfg.out, stem)?;
    Ok(sidecar)
}

fn parse_params<T: for<'de> Deserialize<'de>>(cfg: &ExperimentConfig) -> Result<T> {
    serde_json::from_value(cfg.params.clone())
        .with_context(|| format!("invalid params for kind {}", cfg.kind.name()))
}

fn general_params(n_total: u32, lambda: f64, mu: f64, y0: u32, r: f64) -> Result<GeneralParams> {
    let nc = (n_total as f64 * r).round() as u32 - y0;
    let nf = n_total - y0 - nc;
    GeneralParams::new(n_total, lambda, mu, y0, nc, nf).map_err(Into::into)
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct CdfVariant {
    label: String,
    r: f64,
    mu: f64,
}

#[derive(Deserialize)]
struct ExtinctionCdfParams {
    n_total: u32,
    lambda: f64,
    y0: u32,
    variants: Vec<CdfVariant>,
    #[serde(default)]
    include_branching: bool,
}

fn extinction_cdf_run(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: ExtinctionCdfParams = parse_params(cfg)?;
    let grid = cfg.grid.times();
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut branching_cols: Vec<(String, Vec<f64>)> = Vec::new();

    for (idx, v) in p.variants.iter().enumerate() {
        let gp = general_params(p.n_total, p.lambda, v.mu, p.y0, v.r)?;
        let ens = run_ensemble(
            &Model::General(gp),
            child_seed(cfg.seed, idx as u64),
            cfg.replicates,
            cfg.grid.t_max.max(50.0 / v.mu),
        );
        let cdf = EmpiricalCdf::from_samples(ens.extinction_times())?;
        columns.push((
            format!("empirical_cdf_{}", v.label),
            grid.iter().map(|&t| cdf.eval(t)).collect(),
        ));
        if p.include_branching {
            let b = BranchingParams::from_general(&gp)?;
            branching_cols.push((
                format!("branching_cdf_{}", v.label),
                grid.iter()
                    .map(|&t| extinction_cdf(&b, t).map_err(Error::from))
                    .collect::<Result<Vec<f64>, _>>()?,
            ));
            // Early-mode agreement on [0, T_B].
            let t_b = plateau_time(&b)?;
            let comparison: Vec<f64> = (0..=100).map(|i| t_b * i as f64 / 100.0).collect();
            let sup = cdf.sup_distance_on_grid(|t| extinction_cdf(&b, t).unwrap(), &comparison);
            sidecar.checks.push(SidecarCheck {
                name: format!("sup |empirical - branching| on [0, T_B], {}", v.label),
                passed: sup <= 0.05,
                detail: format!("sup = {sup:.4}, T_B = {t_b:.3}"),
            });
        }
    }

    let mut csv = String::from("t");
    for (name, _) in columns.iter().chain(&branching_cols) {
        csv.push(',');
        csv.push_str(name);
    }
    csv.push('\n');
    for (i, &t) in grid.iter().enumerate() {
        csv.push_str(&format!("{t}"));
        for (_, vals) in columns.iter().chain(&branching_cols) {
            csv.push_str(&format!(",{}", vals[i]));
        }
        csv.push('\n');
    }
    write_csv(&cfg.out, &format!("{stem}.csv"), &csv, sidecar)?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct EarlyExtinctionMeanParams {
    n_total: u32,
    mu: f64,
    y0_values: Vec<u32>,
    rho_values: Vec<f64>,
}

fn early_extinction_mean(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: EarlyExtinctionMeanParams = parse_params(cfg)?;
    let mut csv = String::from("k,rho,lambda,mc_mean,mc_se,branching_mean\n");
    for (i, &k) in p.y0_values.iter().enumerate() {
        for (j, &rho) in p.rho_values.iter().enumerate() {
            if rho >= 1.0 {
                bail!("early_extinction_mean requires subcritical rho, got {rho}");
            }
            let nc = p.n_total - k;
            let lambda = rho * p.mu / nc as f64;
            let gp = GeneralParams::new(p.n_total, lambda, p.mu, k, nc, 0)?;
            let b = BranchingParams::from_general(&gp)?;
            let expect = expected_extinction_time(&b)?;
            let ens = run_ensemble(
                &Model::General(gp),
                child_seed(cfg.seed, (i * 100 + j) as u64),
                cfg.replicates,
                1e9,
            );
            let (mean, se) = ens.mean_se(|r| r.extinction_time);
            csv.push_str(&format!("{k},{rho},{lambda},{mean},{se},{expect}\n"));
            sidecar.checks.push(SidecarCheck {
                name: format!("MC mean vs E[T_b], k = {k}, rho = {rho}"),
                passed: (mean - expect).abs() <= 3.0 * se,
                detail: format!("mc = {mean:.4} +- {se:.4}, branching = {expect:.4}"),
            });
        }
    }
    write_csv(&cfg.out, &format!("{stem}.csv"), &csv, sidecar)?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct TerminalFractionParams {
    n_total: u32,
    y0: u32,
    sweep: String,
    values: Vec<f64>,
    #[serde(default)]
    lambda: f64,
    #[serde(default)]
    mu: f64,
    r_values: Vec<f64>,
}

fn terminal_fraction(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: TerminalFractionParams = parse_params(cfg)?;
    let mut csv = String::from("value,r,sim_fraction,kept_replicates,mf_fraction\n");
    for (i, &r) in p.r_values.iter().enumerate() {
        let tol = if (r - 1.0).abs() < 1e-9 {
            0.03
        } else if (r - 0.5).abs() < 1e-9 {
            0.08
        } else {
            0.10
        };
        for (j, &value) in p.values.iter().enumerate() {
            let (lambda, mu) = match p.sweep.as_str() {
                "lambda" => (value, p.mu),
                "mu" => (p.lambda, value),
                other => bail!("unknown sweep variable `{other}`"),
            };
            let gp = general_params(p.n_total, lambda, mu, p.y0, r)?;
            let mf = MeanFieldParams::from_general(&gp)?;
            let (xc_inf, xf_inf) = meanfield::terminal_uninfected(&mf)?;
            let predicted = xc_inf + xf_inf;
            let seed = child_seed(cfg.seed, (i * 1000 + j) as u64);
            let (sim, kept) = conditioned_final_fraction(&gp, seed, cfg.replicates)
                .context("no late-survival replicates")?;
            csv.push_str(&format!("{value},{r},{sim},{kept},{predicted}\n"));
            let rel = (sim - predicted).abs() / predicted;
            sidecar.checks.push(SidecarCheck {
                name: format!("sim vs mean-field, r = {r}, {} = {value}", p.sweep),
                passed: rel <= tol,
                detail: format!("sim = {sim:.4} ({kept} runs), mf = {predicted:.4}, rel = {rel:.3}"),
            });
        }
    }
    write_csv(&cfg.out, &format!("{stem}.csv"), &csv, sidecar)?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct RangeSpec {
    min: f64,
    max: f64,
    points: usize,
    #[serde(default)]
    log: bool,
}

impl RangeSpec {
    fn values(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                if self.log {
                    self.min * (self.max / self.min).powf(f)
                } else {
                    self.min + (self.max - self.min) * f
                }
            })
            .collect()
    }
}

#[derive(Deserialize)]
struct PhaseSweepParams {
    y0: f64,
    xc0_values: Vec<f64>,
    mu: f64,
    theta_xc0: RangeSpec,
}

fn label_of(x: f64) -> String {
    format!("{x}").replace('.', "")
}

fn phase_sweep(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: PhaseSweepParams = parse_params(cfg)?;
    let grid = p.theta_xc0.values();
    for &xc0 in &p.xc0_values {
        let rows = meanfield::sweep_phase_diagram(p.y0, xc0, p.mu, &grid)?;
        let mut csv = String::from("theta_xc0,xc_inf,xf_inf,y_max,tau\n");
        for r in &rows {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                r.theta_xc0, r.xc_inf, r.xf_inf, r.y_max, r.tau
            ));
        }
        write_csv(
            &cfg.out,
            &format!("{stem}_xc0_{}.csv", label_of(xc0)),
            &csv,
            sidecar,
        )?;
        let monotone = rows.windows(2).all(|w| w[1].xc_inf <= w[0].xc_inf + 1e-12);
        sidecar.checks.push(SidecarCheck {
            name: format!("xc_inf monotone decreasing in theta, xc0 = {xc0}"),
            passed: monotone,
            detail: format!("{} grid points", rows.len()),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct FixedRateSweepParams {
    x0_values: Vec<f64>,
    mu: f64,
    xi: RangeSpec,
}

fn fixed_rate_sweep(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: FixedRateSweepParams = parse_params(cfg)?;
    let grid = p.xi.values();
    for &x0 in &p.x0_values {
        let rows = fixed_rate::sweep_phase_diagram(x0, p.mu, &grid)?;
        let mut csv = String::from("xi,x0,terminal_fraction,y_max,t_peak,tau\n");
        for r in &rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.xi, r.x0, r.terminal_fraction, r.y_max, r.t_peak, r.tau
            ));
        }
        write_csv(
            &cfg.out,
            &format!("{stem}_x0_{}.csv", label_of(x0)),
            &csv,
            sidecar,
        )?;
        let zero_beyond_one = rows
            .iter()
            .filter(|r| r.xi >= 1.0)
            .all(|r| r.terminal_fraction == 0.0);
        sidecar.checks.push(SidecarCheck {
            name: format!("terminal fraction zero for xi >= 1, x0 = {x0}"),
            passed: zero_beyond_one,
            detail: format!("{} grid points", rows.len()),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct BetaMu {
    beta: f64,
    mu: f64,
}

#[derive(Deserialize)]
struct ControlUtilityParams {
    n_total: u32,
    y_star_count: u32,
    y0: f64,
    pairs: Vec<BetaMu>,
    alpha: RangeSpec,
}

fn control_utility(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: ControlUtilityParams = parse_params(cfg)?;
    let y_star = p.y_star_count as f64 / p.n_total as f64;
    let x0 = 1.0 - y_star - p.y0;
    let alphas = p.alpha.values();
    for pair in &p.pairs {
        let template = ControlParams::new(p.n_total, pair.beta, pair.mu, 0.0, y_star, p.y0, x0)?;
        let curve = delay_curve(&template, &alphas)?;
        let mut csv = String::from("alpha,T_bar,h,beta_over_mu_alpha\n");
        for (a, t, h) in curve.rows() {
            let ratio = if a > 0.0 {
                pair.beta / template.mu_at(a)
            } else {
                f64::INFINITY
            };
            csv.push_str(&format!("{a},{t},{h},{ratio}\n"));
        }
        write_csv(
            &cfg.out,
            &format!(
                "{stem}_beta{}_mu{}.csv",
                label_of(pair.beta),
                label_of(pair.mu)
            ),
            &csv,
            sidecar,
        )?;
        let lo = 1.0 / pair.beta;
        let hi = 1.0 / (pair.beta * y_star);
        let bounds = curve
            .t_bars
            .iter()
            .all(|&t| t >= lo - 1e-9 && t <= hi + 1e-9);
        sidecar.checks.push(SidecarCheck {
            name: format!("T-bar bounds, beta = {}, mu = {}", pair.beta, pair.mu),
            passed: bounds,
            detail: format!("range [{lo:.3}, {hi:.3}]"),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct HybridParams {
    n_total: u32,
    lambda: f64,
    mu: f64,
    y0: u32,
    r: f64,
    n0: u32,
}

fn hybrid(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: HybridParams = parse_params(cfg)?;
    let gp = general_params(p.n_total, p.lambda, p.mu, p.y0, p.r)?;
    let mut csv = String::from("replicate,outcome,time,xc_inf,xf_inf\n");
    let mut takeoffs = 0usize;
    for i in 0..cfg.replicates {
        match simulate_hybrid(&gp, child_seed(cfg.seed, i as u64), p.n0)? {
            HybridOutcome::EarlyExtinction { time } => {
                csv.push_str(&format!("{i},early,{time},,\n"));
            }
            HybridOutcome::LateExtinction { switch_time, xc_inf, xf_inf } => {
                takeoffs += 1;
                csv.push_str(&format!("{i},late,{switch_time},{xc_inf},{xf_inf}\n"));
            }
        }
    }
    write_csv(&cfg.out, &format!("{stem}.csv"), &csv, sidecar)?;
    let rho = gp.rho()?;
    if rho > 1.0 {
        let expect = 1.0 - (1.0 / rho).powi(p.y0 as i32);
        let freq = takeoffs as f64 / cfg.replicates as f64;
        let se = (expect * (1.0 - expect) / cfg.replicates as f64).sqrt();
        sidecar.checks.push(SidecarCheck {
            name: "takeoff fraction vs branching survival".into(),
            passed: (freq - expect).abs() <= 3.0 * se,
            detail: format!("freq = {freq:.4}, 1 - 1/rho^y0 = {expect:.4}"),
        });
    } else {
        sidecar.checks.push(SidecarCheck {
            name: "subcritical runs all die early".into(),
            passed: takeoffs == 0,
            detail: format!("{takeoffs} takeoffs in {} runs", cfg.replicates),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct OracleCheckParams {
    n_total: u32,
    lambda: f64,
    mu: f64,
    y0: u32,
    nc: u32,
    nf: u32,
}

fn oracle_check(cfg: &ExperimentConfig, stem: &str, sidecar: &mut Sidecar) -> Result<()> {
    let p: OracleCheckParams = parse_params(cfg)?;
    let gp = GeneralParams::new(p.n_total, p.lambda, p.mu, p.y0, p.nc, p.nf)?;
    let grid = cfg.grid.times();
    let exact = exact_small_n(&gp, &grid)?;
    let ens = run_ensemble(&Model::General(gp), cfg.seed, cfg.replicates, 1e9);
    let cdf = EmpiricalCdf::from_samples(ens.extinction_times())?;

    let mut csv = String::from("t,exact_cdf,mc_cdf\n");
    let mut cdf_ok = true;
    for &(t, f) in &exact.extinction_cdf {
        let mc = cdf.eval(t);
        csv.push_str(&format!("{t},{f},{mc}\n"));
        let se = (f * (1.0 - f) / cfg.replicates as f64).sqrt();
        cdf_ok &= (mc - f).abs() <= 3.0 * se;
    }
    write_csv(&cfg.out, &format!("{stem}_cdf.csv"), &csv, sidecar)?;

    let mut csv = String::from("xc,xf,exact_p,mc_freq\n");
    let mut term_ok = true;
    for o in &exact.terminal {
        let hits = ens
            .records
            .iter()
            .filter(|r| r.final_xc == o.xc && r.final_xf == o.xf)
            .count();
        let freq = hits as f64 / cfg.replicates as f64;
        csv.push_str(&format!("{},{},{},{}\n", o.xc, o.xf, o.probability, freq));
        let se = (o.probability * (1.0 - o.probability) / cfg.replicates as f64).sqrt();
        term_ok &= (freq - o.probability).abs() <= 3.0 * se;
    }
    write_csv(&cfg.out, &format!("{stem}_terminal.csv"), &csv, sidecar)?;

    sidecar.checks.push(SidecarCheck {
        name: "exact extinction CDF vs MC within 3 SE".into(),
        passed: cdf_ok,
        detail: format!("{} grid points", grid.len()),
    });
    sidecar.checks.push(SidecarCheck {
        name: "exact terminal distribution vs MC within 3 SE".into(),
        passed: term_ok,
        detail: format!("{} outcomes", exact.terminal.len()),
    });
    Ok(())
}
