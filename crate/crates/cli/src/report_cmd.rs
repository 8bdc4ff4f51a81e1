//! The `report` command: run validation suites and emit machine-readable
//! pass/fail JSON. Failures are data, not errors; they surface through the
//! exit status.

use std::fs;
use std::path::Path;

use anyhow::{bail, Result};
use serde::Serialize;
use swarm_core::report::{run_suite, SuiteReport, SUITES};

use crate::figures;

/// Suite owned by the harness rather than the core library: rerunning a
/// whole figure preset with the same master seed must reproduce its CSVs
/// byte for byte.
pub const FIGURE_DETERMINISM: &str = "figure_determinism";

#[derive(Serialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

pub fn available() -> Vec<&'static str> {
    let mut v = SUITES.to_vec();
    v.push(FIGURE_DETERMINISM);
    v
}

/// Run one suite or `all`; returns the report document.
pub fn run(name: &str) -> Result<ReportDocument> {
    let mut suites = Vec::new();
    if name == "all" {
        for s in SUITES {
            suites.push(run_suite(s).expect("known suite"));
        }
        suites.push(figure_determinism()?);
    } else if name == FIGURE_DETERMINISM {
        suites.push(figure_determinism()?);
    } else {
        match run_suite(name) {
            Some(rep) => suites.push(rep),
            None => bail!(
                "unknown suite `{name}` (known: all, {})",
                available().join(", ")
            ),
        }
    }
    let passed = suites.iter().all(|s| s.passed());
    Ok(ReportDocument {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        suites,
        passed,
    })
}

pub fn write_json(doc: &ReportDocument, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(doc)?)?;
    Ok(())
}

/// Run the figure-3 preset twice at reduced replicate count into scratch
/// directories and compare every CSV byte for byte.
fn figure_determinism() -> Result<SuiteReport> {
    use swarm_core::report::CheckResult;

    let scratch = std::env::temp_dir().join(format!("swarmsim-det-{}", std::process::id()));
    let run_once = |tag: &str| -> Result<Vec<(String, Vec<u8>)>> {
        let dir = scratch.join(tag);
        let (mut cfg, stem, _) = figures::preset("3", dir.clone(), 7)?;
        cfg.replicates = 60;
        let sidecar = crate::experiments::run(&cfg, &stem)?;
        let mut files = Vec::new();
        for name in &sidecar.outputs {
            files.push((name.clone(), fs::read(dir.join(name))?));
        }
        Ok(files)
    };
    let a = run_once("a")?;
    let b = run_once("b")?;
    let _ = fs::remove_dir_all(&scratch);

    let identical = a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|((na, ca), (nb, cb))| na == nb && ca == cb);
    let bytes: usize = a.iter().map(|(_, c)| c.len()).sum();
    Ok(SuiteReport {
        suite: FIGURE_DETERMINISM.to_string(),
        checks: vec![CheckResult {
            name: "figure preset rerun is byte-identical".to_string(),
            passed: identical,
            detail: format!("{} files, {} bytes compared", a.len(), bytes),
        }],
    })
}
