//! `swarmsim`: experiment harness for the swarm transient toolkit.
//!
//! Exit codes: 0 success, 1 embedded checks failed, 2 config or IO error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use swarm_cli::config::{write_csv, ExperimentConfig, Sidecar};
use swarm_cli::{experiments, figures, report_cmd};
use swarm_core::branching::{extinction_cdf, BranchingParams};
use swarm_core::control::delay_curve;
use swarm_core::model::ControlParams;
use swarm_core::{fixed_rate, meanfield};

#[derive(Parser)]
#[command(name = "swarmsim", version, about = "Transient dynamics of P2P file-dissemination swarms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunFlags {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config value.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the config value.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replicate count; overrides the config value.
    #[arg(long)]
    replicates: Option<usize>,
    /// key=value overrides applied to the config (dots descend, e.g.
    /// params.lambda=0.006).
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Simulate(RunFlags),
    /// Tabulate the branching extinction-time CDF as `t,G_k(t)` CSV.
    Branching {
        #[arg(long, default_value_t = 2.394)]
        lambda_nc: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sweep the mean-field phase diagram for one set of initial fractions.
    Meanfield {
        #[arg(long, default_value_t = 0.05)]
        y0: f64,
        #[arg(long, default_value_t = 0.95)]
        xc0: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.1)]
        theta_xc0_min: f64,
        #[arg(long, default_value_t = 100.0)]
        theta_xc0_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sweep the fixed-request-rate phase diagram over xi.
    Fixedrate {
        #[arg(long, default_value_t = 0.8)]
        x0: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.05)]
        xi_min: f64,
        #[arg(long, default_value_t = 5.0)]
        xi_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tabulate expected delay and utility over an investment grid.
    Control {
        #[arg(long, default_value_t = 500)]
        n_total: u32,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 2)]
        y_star_count: u32,
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 14.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 57)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a figure preset (ids: 1, 1bis, 3, 4, 5, 6, 7, 8, 9).
    Figure {
        fig_id: String,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run a validation suite and emit pass/fail JSON.
    Report {
        /// Suite name or `all`.
        suite: String,
        /// Also write the JSON document to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List available suites and exit.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(flags) => {
            let cfg = resolve_config(&flags, None)?;
            let sidecar = experiments::run(&cfg, cfg.kind.name())?;
            print_checks(&sidecar);
            Ok(sidecar.all_checks_passed())
        }
        Command::Figure { fig_id, flags } => {
            let out = flags.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let seed = flags.seed.unwrap_or(42);
            let (mut cfg, stem, notes) = figures::preset(&fig_id, out, seed)?;
            if let Some(r) = flags.replicates {
                cfg.replicates = r;
            }
            cfg.apply_overrides(&flags.overrides)?;
            let mut sidecar = experiments::run(&cfg, &stem)?;
            sidecar.implementer_choice = notes;
            sidecar.write(&cfg.out, &stem)?;
            print_checks(&sidecar);
            Ok(sidecar.all_checks_passed())
        }
        Command::Branching { lambda_nc, mu, k, t_max, points, out } => {
            let p = BranchingParams::new(lambda_nc, mu, k)?;
            let mut csv = String::from("t,G_k\n");
            for i in 0..points.max(2) {
                let t = t_max * i as f64 / (points.max(2) - 1) as f64;
                csv.push_str(&format!("{t},{}\n", extinction_cdf(&p, t)?));
            }
            let mut sidecar = sidecar_for("branching", &out);
            write_csv(&out, "branching_cdf.csv", &csv, &mut sidecar)?;
            sidecar.write(&out, "branching_cdf")?;
            Ok(true)
        }
        Command::Meanfield { y0, xc0, mu, theta_xc0_min, theta_xc0_max, points, out } => {
            let n = points.max(2);
            let grid: Vec<f64> = (0..n)
                .map(|i| {
                    theta_xc0_min
                        * (theta_xc0_max / theta_xc0_min).powf(i as f64 / (n - 1) as f64)
                })
                .collect();
            let rows = meanfield::sweep_phase_diagram(y0, xc0, mu, &grid)?;
            let mut csv = String::from("theta_xc0,xc_inf,xf_inf,y_max,tau\n");
            for r in rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.theta_xc0, r.xc_inf, r.xf_inf, r.y_max, r.tau
                ));
            }
            let mut sidecar = sidecar_for("meanfield", &out);
            write_csv(&out, "meanfield_sweep.csv", &csv, &mut sidecar)?;
            sidecar.write(&out, "meanfield_sweep")?;
            Ok(true)
        }
        Command::Fixedrate { x0, mu, xi_min, xi_max, points, out } => {
            let n = points.max(2);
            let grid: Vec<f64> = (0..n)
                .map(|i| xi_min + (xi_max - xi_min) * i as f64 / (n - 1) as f64)
                .collect();
            let rows = fixed_rate::sweep_phase_diagram(x0, mu, &grid)?;
            let mut csv = String::from("xi,x0,terminal_fraction,y_max,t_peak,tau\n");
            for r in rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.xi, r.x0, r.terminal_fraction, r.y_max, r.t_peak, r.tau
                ));
            }
            let mut sidecar = sidecar_for("fixedrate", &out);
            write_csv(&out, "fixedrate_sweep.csv", &csv, &mut sidecar)?;
            sidecar.write(&out, "fixedrate_sweep")?;
            Ok(true)
        }
        Command::Control {
            n_total,
            beta,
            mu,
            y_star_count,
            y0,
            alpha_min,
            alpha_max,
            points,
            out,
        } => {
            let y_star = y_star_count as f64 / n_total as f64;
            let template =
                ControlParams::new(n_total, beta, mu, 0.0, y_star, y0, 1.0 - y_star - y0)?;
            let n = points.max(2);
            let alphas: Vec<f64> = (0..n)
                .map(|i| alpha_min + (alpha_max - alpha_min) * i as f64 / (n - 1) as f64)
                .collect();
            let curve = delay_curve(&template, &alphas)?;
            let mut csv = String::from("alpha,T_bar,h,beta_over_mu_alpha\n");
            for (a, t, h) in curve.rows() {
                let ratio = if a > 0.0 { beta / template.mu_at(a) } else { f64::INFINITY };
                csv.push_str(&format!("{a},{t},{h},{ratio}\n"));
            }
            let mut sidecar = sidecar_for("control", &out);
            write_csv(&out, "control_utility.csv", &csv, &mut sidecar)?;
            sidecar.write(&out, "control_utility")?;
            Ok(true)
        }
        Command::Report { suite, out, list } => {
            if list {
                println!("all");
                for s in report_cmd::available() {
                    println!("{s}");
                }
                return Ok(true);
            }
            let doc = report_cmd::run(&suite)?;
            for s in &doc.suites {
                for c in &s.checks {
                    println!(
                        "[{}] {} :: {} ({})",
                        if c.passed { "PASS" } else { "FAIL" },
                        s.suite,
                        c.name,
                        c.detail
                    );
                }
            }
            println!("{}", serde_json::to_string_pretty(&doc)?);
            if let Some(path) = out {
                report_cmd::write_json(&doc, &path)?;
            }
            Ok(doc.passed)
        }
    }
}

fn resolve_config(flags: &RunFlags, preset: Option<ExperimentConfig>) -> Result<ExperimentConfig> {
    let mut cfg = match (&flags.config, preset) {
        (Some(path), _) => ExperimentConfig::from_file(path)?,
        (None, Some(cfg)) => cfg,
        (None, None) => anyhow::bail!("--config is required for simulate"),
    };
    cfg.apply_overrides(&flags.overrides)?;
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(replicates) = flags.replicates {
        anyhow::ensure!(replicates >= 1, "replicates must be >= 1");
        cfg.replicates = replicates;
    }
    if let Some(out) = &flags.out {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

fn sidecar_for(command: &str, out: &PathBuf) -> Sidecar {
    Sidecar::new(serde_json::json!({
        "command": command,
        "out": out.display().to_string(),
    }))
}

fn print_checks(sidecar: &Sidecar) {
    for c in &sidecar.checks {
        println!(
            "[{}] {} ({})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
}
