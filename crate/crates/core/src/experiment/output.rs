use std::fs;
use std::path::Path;

use serde_json::json;

use super::{SingleRun, SweepResult};
use crate::error::Result;
use crate::rates::{write_link_diagnostics, EvalOptions, Evaluator};

pub const RESULTS_HEADER: [&str; 9] = [
    "axis",
    "value",
    "seed",
    "algorithm",
    "sum_rate_bps",
    "fairness",
    "runtime_ms",
    "iterations",
    "per_bs_utilities",
];

pub const SUMMARY_HEADER: [&str; 9] = [
    "axis",
    "value",
    "algorithm",
    "runs",
    "sum_rate_mean",
    "sum_rate_std",
    "fairness_mean",
    "fairness_std",
    "runtime_ms_mean",
];

fn json_file(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Writes `results.csv`, `summary.csv`, `runs.json`, `sweep.json` and
/// `config.json` into `dir` (created if missing).
pub fn write_sweep(result: &SweepResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;

    let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
    w.write_record(RESULTS_HEADER)?;
    for r in &result.records {
        let utilities: Vec<String> = r.report.per_bs_utility.iter().map(|u| u.to_string()).collect();
        w.write_record([
            r.axis.name().to_string(),
            r.value.to_string(),
            r.seed.to_string(),
            r.algorithm.name().to_string(),
            r.sum_rate_bps.to_string(),
            r.fairness.to_string(),
            r.runtime_ms.to_string(),
            r.iterations.to_string(),
            utilities.join(";"),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(SUMMARY_HEADER)?;
    for s in result.summary() {
        w.write_record([
            s.axis.name().to_string(),
            s.value.to_string(),
            s.algorithm.name().to_string(),
            s.runs.to_string(),
            s.sum_rate_mean.to_string(),
            s.sum_rate_std.to_string(),
            s.fairness_mean.to_string(),
            s.fairness_std.to_string(),
            s.runtime_ms_mean.to_string(),
        ])?;
    }
    w.flush()?;

    json_file(&dir.join("runs.json"), &result.records)?;
    json_file(&dir.join("sweep.json"), &result.spec)?;
    json_file(&dir.join("config.json"), &result.base)?;
    Ok(())
}

/// Writes `report.json`, `trace.json` and `scenario.json` (plus `links.csv`
/// when `diagnostics` is set) into `dir`.
pub fn write_single(run: &SingleRun, dir: &Path, diagnostics: bool) -> Result<()> {
    fs::create_dir_all(dir)?;
    let report = json!({
        "algorithm": run.algorithm,
        "seed": run.seed,
        "sum_rate_bps": run.report.sum_rate,
        "fairness": run.report.fairness,
        "per_user_rate": run.report.per_user_rate,
        "per_bs_utility": run.report.per_bs_utility,
        "assignment": run.assignment,
        "phases": run.phases,
    });
    json_file(&dir.join("report.json"), &report)?;
    json_file(&dir.join("trace.json"), &run.trace)?;
    let mut snapshot = run.scenario.to_canonical_json();
    snapshot.push('\n');
    fs::write(dir.join("scenario.json"), snapshot)?;
    if diagnostics {
        let eval = Evaluator::new(&run.scenario, EvalOptions::default());
        let rows = eval.link_diagnostics(&run.phases);
        write_link_diagnostics(&rows, fs::File::create(dir.join("links.csv"))?)?;
    }
    Ok(())
}
