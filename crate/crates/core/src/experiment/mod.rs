//! Parameter sweeps and single runs with CSV/JSON output.
//!
//! A sweep varies one [`Axis`] over a list of values; every (value, seed)
//! pair builds a fresh scenario and runs each requested algorithm on it.
//! Rows are sorted by (value position, seed, algorithm), so the files do not
//! depend on the worker count.
//!
//! `results.csv` columns: `axis,value,seed,algorithm,sum_rate_bps,fairness,
//! runtime_ms,iterations,per_bs_utilities` (cell utilities joined by `;`).
//! `summary.csv` holds the mean and sample standard deviation per
//! (value, algorithm).

mod axis;
mod output;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use axis::Axis;
pub use output::{write_single, write_sweep, RESULTS_HEADER, SUMMARY_HEADER};

use crate::error::{Error, Result};
use crate::optim::{association_count, run_algorithm, Algorithm, OptimizerConfig, OptimizerTrace, Outcome};
use crate::rates::{Assignment, PhaseConfig, RateReport};
use crate::scenario::{build_scenario, Scenario, ScenarioConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one axis value".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("sweep needs at least one seed".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("sweep needs at least one algorithm".into()));
        }
        Ok(())
    }
}

/// Execution settings shared by sweeps and single runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub optimizer: OptimizerConfig,
    /// Worker threads; `None` uses the global pool.
    pub parallelism: Option<usize>,
    /// Record wall-clock times. Off makes every output byte-reproducible.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { optimizer: OptimizerConfig::default(), parallelism: None, timing: true }
    }
}

/// One (axis value, seed, algorithm) result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub axis: Axis,
    pub value: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub sum_rate_bps: f64,
    pub fairness: f64,
    pub runtime_ms: f64,
    pub iterations: usize,
    pub report: RateReport,
    pub trace: OptimizerTrace,
    #[serde(skip)]
    value_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub axis: Axis,
    pub value: f64,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub sum_rate_mean: f64,
    pub sum_rate_std: f64,
    pub fairness_mean: f64,
    pub fairness_std: f64,
    pub runtime_ms_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub base: ScenarioConfig,
    pub records: Vec<RunRecord>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl SweepResult {
    /// Records of one algorithm at one axis value, in seed order.
    pub fn select(&self, value: f64, algorithm: Algorithm) -> Vec<&RunRecord> {
        self.records.iter().filter(|r| r.value == value && r.algorithm == algorithm).collect()
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut rows = Vec::new();
        for &value in &self.spec.values {
            for &algorithm in &self.spec.algorithms {
                let sel = self.select(value, algorithm);
                if sel.is_empty() {
                    continue;
                }
                let rates: Vec<f64> = sel.iter().map(|r| r.sum_rate_bps).collect();
                let fair: Vec<f64> = sel.iter().map(|r| r.fairness).collect();
                let time: Vec<f64> = sel.iter().map(|r| r.runtime_ms).collect();
                let (sum_rate_mean, sum_rate_std) = mean_std(&rates);
                let (fairness_mean, fairness_std) = mean_std(&fair);
                rows.push(SummaryRow {
                    axis: self.spec.axis,
                    value,
                    algorithm,
                    runs: sel.len(),
                    sum_rate_mean,
                    sum_rate_std,
                    fairness_mean,
                    fairness_std,
                    runtime_ms_mean: mean_std(&time).0,
                });
            }
        }
        rows
    }
}

fn in_pool<T: Send>(parallelism: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match parallelism {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Runs every (value, seed, algorithm) combination of `spec` on top of `base`.
/// Instances too large for the traversal are refused before anything runs.
pub fn run_sweep(spec: &SweepSpec, base: &ScenarioConfig, options: &RunOptions) -> Result<SweepResult> {
    spec.validate()?;
    let configs: Vec<ScenarioConfig> =
        spec.values.iter().map(|&v| spec.axis.apply(base, v)).collect::<Result<_>>()?;
    for c in &configs {
        c.validate()?;
    }
    let jobs: Vec<(usize, u64)> =
        (0..configs.len()).flat_map(|i| spec.seeds.iter().map(move |&s| (i, s))).collect();

    let scenarios: Vec<Scenario> = in_pool(options.parallelism, || {
        jobs.par_iter().map(|&(i, seed)| build_scenario(&configs[i], seed)).collect::<Result<Vec<_>>>()
    })??;
    if spec.algorithms.contains(&Algorithm::Os) {
        for s in &scenarios {
            let count = association_count(s);
            if count > options.optimizer.traversal_limit {
                return Err(Error::TraversalTooLarge { count, limit: options.optimizer.traversal_limit });
            }
        }
    }

    let tasks: Vec<(usize, usize, Algorithm)> = (0..jobs.len())
        .flat_map(|j| spec.algorithms.iter().enumerate().map(move |(k, &a)| (j, k, a)))
        .collect();
    let mut records: Vec<(usize, RunRecord)> = in_pool(options.parallelism, || {
        tasks
            .par_iter()
            .map(|&(j, k, algorithm)| {
                let (i, seed) = jobs[j];
                let started = Instant::now();
                let outcome = run_algorithm(&scenarios[j], algorithm, seed, &options.optimizer)?;
                let runtime_ms = if options.timing { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
                let mut trace = outcome.trace;
                if !options.timing {
                    trace.clear_timing();
                }
                Ok((
                    k,
                    RunRecord {
                        axis: spec.axis,
                        value: spec.values[i],
                        seed,
                        algorithm,
                        sum_rate_bps: outcome.report.sum_rate,
                        fairness: outcome.report.fairness,
                        runtime_ms,
                        iterations: trace.iterations(),
                        report: outcome.report,
                        trace,
                        value_index: i,
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    records.sort_by_key(|(k, r)| (r.value_index, r.seed, *k));
    Ok(SweepResult { spec: spec.clone(), base: base.clone(), records: records.into_iter().map(|(_, r)| r).collect() })
}

/// Everything needed to reproduce and inspect one optimizer run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingleRun {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub scenario: Scenario,
    pub assignment: Assignment,
    pub phases: PhaseConfig,
    pub report: RateReport,
    pub trace: OptimizerTrace,
}

pub fn run_single(config: &ScenarioConfig, algorithm: Algorithm, seed: u64, options: &RunOptions) -> Result<SingleRun> {
    config.validate()?;
    let scenario = build_scenario(config, seed)?;
    let Outcome { assignment, phases, report, mut trace, .. } =
        run_algorithm(&scenario, algorithm, seed, &options.optimizer)?;
    if !options.timing {
        trace.clear_timing();
    }
    Ok(SingleRun { algorithm, seed, scenario, assignment, phases, report, trace })
}
