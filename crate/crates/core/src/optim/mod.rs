//! Association and phase optimizers.
//!
//! [`bcd_optimize`] (the proposed algorithm, "PA") alternates the coalition
//! game and the phase search. The baselines reuse the same building blocks
//! with parts switched off, and [`traversal_optimal`] enumerates every
//! association for reference.

mod baselines;
mod bcd;
mod coalition;
mod phase;
mod trace;
mod traversal;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use baselines::{baseline_ccga, baseline_cga, baseline_ra, baseline_ro, mmwave_free_candidates};
pub use bcd::bcd_optimize;
pub use coalition::{coalition_game, switch_gain, CoalitionState};
pub use phase::phase_search;
pub use trace::{OptimizerTrace, Termination, TraceEntry};
pub use traversal::{association_count, traversal_optimal, TraversalMode};

use crate::error::{Error, Result};
use crate::rates::{Assignment, PhaseConfig, RateReport};
use crate::scenario::Scenario;

/// Tunables shared by every optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Phase search stops once a sweep changes a cell's utility by less than this (bits/s).
    pub epsilon: f64,
    /// BCD stops once the relative outer-iteration improvement drops below this.
    pub xi: f64,
    /// Rounds the coalition game compares against.
    pub history_window: usize,
    pub max_rounds: usize,
    pub max_sweeps: usize,
    pub max_outer_iterations: usize,
    pub random_association_draws: usize,
    pub traversal_limit: u128,
    pub traversal_mode: TraversalMode,
    /// Scale the RIS interference term by `k0`.
    pub ris_interference_k0: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            xi: 3e-3,
            history_window: 5,
            max_rounds: 1000,
            max_sweeps: 100,
            max_outer_iterations: 50,
            random_association_draws: 100,
            traversal_limit: 1_000_000,
            traversal_mode: TraversalMode::LocalSearch,
            ris_interference_k0: false,
        }
    }
}

impl OptimizerConfig {
    /// Thresholds read as natural exponentials: `e^-3` and `3 e^-3`.
    pub fn natural_exponent_thresholds() -> Self {
        let t = (-3.0f64).exp();
        Self { epsilon: t, xi: 3.0 * t, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    /// Coalition game + phase search alternated by BCD.
    Pa,
    /// Coalition game without RIS.
    Cga,
    /// Random association, phase search only.
    Ro,
    /// Mean over random associations, no RIS.
    Ra,
    /// Coalition game over cellular cells only.
    Ccga,
    /// Exhaustive association traversal.
    Os,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Pa, Algorithm::Cga, Algorithm::Ro, Algorithm::Ra, Algorithm::Ccga, Algorithm::Os];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pa => "PA",
            Algorithm::Cga => "CGA",
            Algorithm::Ro => "RO",
            Algorithm::Ra => "RA",
            Algorithm::Ccga => "CCGA",
            Algorithm::Os => "OS",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub algorithm: Algorithm,
    pub assignment: Assignment,
    pub phases: PhaseConfig,
    pub report: RateReport,
    pub trace: OptimizerTrace,
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1e3)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        Ok(Duration::from_secs_f64(ms.max(0.0) / 1e3))
    }
}

/// Runs `algorithm` on a frozen scenario. `seed` drives every random
/// initialization, so identical inputs give identical outcomes.
pub fn run_algorithm(scenario: &Scenario, algorithm: Algorithm, seed: u64, config: &OptimizerConfig) -> Result<Outcome> {
    let start = Instant::now();
    let (assignment, phases, report, trace) = match algorithm {
        Algorithm::Pa => bcd_optimize(scenario, seed, config),
        Algorithm::Cga => baseline_cga(scenario, seed, config),
        Algorithm::Ro => baseline_ro(scenario, seed, config),
        Algorithm::Ra => baseline_ra(scenario, seed, config),
        Algorithm::Ccga => baseline_ccga(scenario, seed, config),
        Algorithm::Os => {
            let (a, p, r, t, _) = traversal_optimal(scenario, config)?;
            (a, p, r, t)
        }
    };
    Ok(Outcome { algorithm, assignment, phases, report, trace, elapsed: start.elapsed() })
}
