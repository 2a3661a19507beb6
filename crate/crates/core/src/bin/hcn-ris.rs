use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hcn_ris::experiment::{self, Axis, RunOptions, SweepSpec};
use hcn_ris::optim::{association_count, Algorithm, OptimizerConfig, TraversalMode};
use hcn_ris::scenario::{build_scenario, presets, ScenarioConfig};
use hcn_ris::Error;

/// Joint user association and RIS phase optimization for multi-band HCNs.
#[derive(Parser)]
#[command(name = "hcn-ris", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter over several values, seeds and algorithms.
    Sweep(SweepArgs),
    /// Run one algorithm on one scenario.
    Single(SingleArgs),
    /// Parse a scenario config, build it and print a summary.
    ValidateConfig(ValidateArgs),
}

#[derive(Args)]
struct Tuning {
    /// Phase-search stop threshold (bits/s).
    #[arg(long)]
    epsilon: Option<f64>,
    /// BCD relative stop threshold.
    #[arg(long)]
    xi: Option<f64>,
    /// Largest association count the traversal accepts.
    #[arg(long)]
    traversal_limit: Option<u128>,
    /// Enumerate every phase configuration inside the traversal.
    #[arg(long)]
    exhaustive_phases: bool,
    /// Zero all wall-clock fields so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl Tuning {
    fn options(&self, parallelism: Option<usize>) -> RunOptions {
        let mut optimizer = OptimizerConfig::default();
        if let Some(e) = self.epsilon {
            optimizer.epsilon = e;
        }
        if let Some(x) = self.xi {
            optimizer.xi = x;
        }
        if let Some(l) = self.traversal_limit {
            optimizer.traversal_limit = l;
        }
        if self.exhaustive_phases {
            optimizer.traversal_mode = TraversalMode::ExhaustivePhases;
        }
        RunOptions { optimizer, parallelism, timing: !self.no_timing }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Base scenario config (JSON). Defaults to the axis' reference layout.
    #[arg(long)]
    config: Option<PathBuf>,
    /// user_group, subchannel_group, ris_n, ris_e, outage_beta, beamwidth_theta3db or thz_enabled.
    #[arg(long)]
    axis: Axis,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Seeds: comma-separated list and/or ranges such as `0..20`.
    #[arg(long, alias = "seed", default_value = "0..20")]
    seeds: String,
    /// Comma-separated algorithms (PA, CGA, RO, RA, CCGA, OS).
    #[arg(long, value_delimiter = ',', default_value = "PA,CGA,RO,RA,CCGA")]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Sweep name; defaults to the axis name.
    #[arg(long)]
    name: Option<String>,
    /// Output sub-directory; defaults to a timestamp.
    #[arg(long)]
    run_label: Option<String>,
    #[arg(long)]
    parallelism: Option<usize>,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args)]
struct SingleArgs {
    /// Scenario config (JSON). Defaults to the ten-cell, 55-user layout.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "PA")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "results/single")]
    out: PathBuf,
    /// Also write per-link channel diagnostics (links.csv).
    #[arg(long)]
    diagnostics: bool,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Config(format!("invalid seed list {text:?}"));
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                seeds.extend(a..b);
            }
            None => seeds.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(seeds)
}

fn load(path: Option<&Path>, fallback: impl FnOnce() -> ScenarioConfig) -> Result<ScenarioConfig, Error> {
    match path {
        Some(p) => ScenarioConfig::from_path(p).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("{}: {io}", p.display())),
            other => other,
        }),
        None => Ok(fallback()),
    }
}

fn sweep(args: SweepArgs) -> Result<(), Error> {
    let base = load(args.config.as_deref(), || args.axis.default_base())?;
    let spec = SweepSpec {
        name: args.name.unwrap_or_else(|| args.axis.name().to_string()),
        axis: args.axis,
        values: args.values,
        seeds: parse_seeds(&args.seeds)?,
        algorithms: args.algorithms,
    };
    let options = args.tuning.options(args.parallelism);
    let result = experiment::run_sweep(&spec, &base, &options)?;
    let label = args.run_label.unwrap_or_else(|| chrono::Local::now().format("%Y%m%dT%H%M%S").to_string());
    let dir = args.out.join(&spec.name).join(label);
    experiment::write_sweep(&result, &dir)?;
    println!("{} runs written to {}", result.records.len(), dir.display());
    Ok(())
}

fn single(args: SingleArgs) -> Result<(), Error> {
    let config = load(args.config.as_deref(), presets::default_config)?;
    let run = experiment::run_single(&config, args.algorithm, args.seed, &args.tuning.options(None))?;
    experiment::write_single(&run, &args.out, args.diagnostics)?;
    println!(
        "{} seed {}: sum rate {:.3} Mbit/s, fairness {:.4} ({})",
        run.algorithm,
        run.seed,
        run.report.sum_rate / 1e6,
        run.report.fairness,
        args.out.display()
    );
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), Error> {
    let config = ScenarioConfig::from_path(&args.config)?;
    config.validate()?;
    let s = build_scenario(&config, args.seed)?;
    let directional = (0..s.num_base_stations()).filter(|&b| s.is_directional(b)).count();
    println!("config ok: {} cells ({directional} directional), {} users", s.num_base_stations(), s.num_users());
    println!("associations to enumerate: {}", association_count(&s));
    if s.diagnostics.clamped_links > 0 {
        println!("links shorter than the reference distance: {}", s.diagnostics.clamped_links);
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::TraversalTooLarge { .. } => 3,
        Error::Config(_) | Error::Json(_) | Error::Uncovered { .. } | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Single(a) => single(a),
        Command::ValidateConfig(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
