//! Experiment configuration: a JSON document per experiment, overridable
//! from the command line. Precedence: built-in defaults < config file <
//! key=value overrides < named flags. Every run writes a JSON sidecar with
//! the fully resolved configuration and the tool version.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Experiment families runnable through `swarmsim simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ExtinctionCdf,
    EarlyExtinctionMean,
    TerminalFraction,
    PhaseSweep,
    FixedRateSweep,
    ControlUtility,
    Hybrid,
    OracleCheck,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExtinctionCdf => "extinction_cdf",
            Self::EarlyExtinctionMean => "early_extinction_mean",
            Self::TerminalFraction => "terminal_fraction",
            Self::PhaseSweep => "phase_sweep",
            Self::FixedRateSweep => "fixed_rate_sweep",
            Self::ControlUtility => "control_utility",
            Self::Hybrid => "hybrid",
            Self::OracleCheck => "oracle_check",
        }
    }
}

/// Uniform time grid specification.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { t_max: 25.0, points: 251 }
    }
}

impl GridSpec {
    pub fn times(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n)
            .map(|i| self.t_max * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// One experiment: kind, seed, replicate count, output directory, time
/// grid, and kind-specific parameters (left as JSON until the runner
/// interprets them).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub params: Value,
}

fn default_seed() -> u64 {
    42
}
fn default_replicates() -> usize {
    1000
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        if cfg.replicates < 1 {
            bail!("replicates must be >= 1");
        }
        Ok(cfg)
    }

    /// Apply `key=value` overrides; dotted keys descend into `params`.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        if overrides.is_empty() {
            return Ok(());
        }
        let mut doc = serde_json::to_value(&*self)?;
        for ov in overrides {
            let (key, raw) = ov
                .split_once('=')
                .with_context(|| format!("override `{ov}` is not key=value"))?;
            let value: Value =
                serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            set_path(&mut doc, key, value)
                .with_context(|| format!("cannot apply override `{ov}`"))?;
        }
        *self = serde_json::from_value(doc).context("overrides left an invalid config")?;
        if self.replicates < 1 {
            bail!("replicates must be >= 1");
        }
        Ok(())
    }
}

fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut node = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if i + 1 == parts.len() {
            match node {
                Value::Object(map) => {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                _ => bail!("`{part}` is not an object field"),
            }
        }
        node = match node {
            Value::Object(map) => map
                .entry(part.to_string())
                .or_insert_with(|| Value::Object(Default::default())),
            _ => bail!("`{part}` is not an object field"),
        };
    }
    Ok(())
}

/// Machine-readable summary written next to every experiment's CSVs.
#[derive(Debug, Serialize)]
pub struct Sidecar {
    pub tool_version: String,
    pub config: Value,
    /// Parameters the source material leaves unspecified, chosen here.
    pub implementer_choice: Vec<String>,
    pub outputs: Vec<String>,
    pub checks: Vec<SidecarCheck>,
}

#[derive(Debug, Serialize)]
pub struct SidecarCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Sidecar {
    pub fn new(config: Value) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            implementer_choice: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn for_experiment(config: &ExperimentConfig) -> Self {
        Self::new(serde_json::to_value(config).expect("config serializes"))
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{stem}.summary.json"));
        fs::write(&path, serde_json::to_string_pretty(self)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}

/// Write a CSV file and record it in the sidecar.
pub fn write_csv(dir: &Path, name: &str, contents: &str, sidecar: &mut Sidecar) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    sidecar.outputs.push(name.to_string());
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_descend_into_params() {
        let mut cfg = ExperimentConfig {
            kind: ExperimentKind::PhaseSweep,
            seed: 1,
            replicates: 10,
            out: PathBuf::from("out"),
            grid: GridSpec::default(),
            params: serde_json::json!({"y0": 0.05}),
        };
        cfg.apply_overrides(&[
            "seed=7".into(),
            "params.y0=0.1".into(),
            "params.label=abc".into(),
        ])
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.params["y0"], serde_json::json!(0.1));
        assert_eq!(cfg.params["label"], serde_json::json!("abc"));
    }

    #[test]
    fn bad_override_is_rejected() {
        let mut cfg = ExperimentConfig {
            kind: ExperimentKind::PhaseSweep,
            seed: 1,
            replicates: 10,
            out: PathBuf::from("out"),
            grid: GridSpec::default(),
            params: Value::Null,
        };
        assert!(cfg.apply_overrides(&["no_equals_sign".into()]).is_err());
        assert!(cfg.apply_overrides(&["replicates=0".into()]).is_err());
    }
}
