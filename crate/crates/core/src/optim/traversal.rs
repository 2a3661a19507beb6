//! Exhaustive enumeration of user associations.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::bcd::eval_options;
use super::phase::sweep_panel;
use super::trace::{OptimizerTrace, Termination};
use super::OptimizerConfig;
use crate::error::{Error, Result};
use crate::rates::{Assignment, Evaluator, PhaseConfig, RateReport};
use crate::scenario::Scenario;
use crate::{BsId, UserId};

/// How the phases of each enumerated association are chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraversalMode {
    /// Local phase search from the all-zero configuration.
    #[default]
    LocalSearch,
    /// Every phase configuration of every panel (tiny panels only).
    ExhaustivePhases,
}

/// Number of associations: product of the candidate-set sizes, saturating.
pub fn association_count(scenario: &Scenario) -> u128 {
    scenario
        .users
        .iter()
        .filter(|u| !u.candidate_bs.is_empty())
        .fold(1u128, |acc, u| acc.saturating_mul(u.candidate_bs.len() as u128))
}

fn panel_configurations(scenario: &Scenario) -> u128 {
    scenario
        .base_stations
        .iter()
        .filter_map(|b| b.ris.as_ref())
        .map(|p| (p.levels() as u128).saturating_pow(p.num_elements() as u32))
        .max()
        .unwrap_or(1)
}

/// Best phases of one panel for a given member set.
fn optimize_panel(eval: &Evaluator, assignment: &Assignment, bs: BsId, config: &OptimizerConfig) -> Vec<u8> {
    let mut phases = PhaseConfig::zeros(eval.scenario);
    match config.traversal_mode {
        TraversalMode::LocalSearch => {
            let mut utility = eval.bs_utility(assignment, &phases, bs);
            for _ in 0..config.max_sweeps {
                let (_, after) = sweep_panel(eval, assignment, &mut phases, bs, utility);
                let done = (after - utility).abs() < config.epsilon;
                utility = after;
                if done {
                    break;
                }
            }
        }
        TraversalMode::ExhaustivePhases => {
            let levels = eval.scenario.base_stations[bs].ris.as_ref().expect("panel").levels() as u8;
            let n = phases.panel(bs).expect("panel").len();
            let mut best = (eval.bs_utility(assignment, &phases, bs), vec![0u8; n]);
            let mut idx = vec![0u8; n];
            loop {
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < levels {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
                phases.panels[bs] = Some(idx.clone());
                let u = eval.bs_utility(assignment, &phases, bs);
                if u > best.0 {
                    best = (u, idx.clone());
                }
            }
            return best.1;
        }
    }
    phases.panels[bs].take().expect("panel")
}

/// Enumerates every feasible association, optimizes the phases of each and
/// keeps the best. Refuses instances with more than `traversal_limit`
/// associations (or panel configurations, in exhaustive-phase mode).
pub fn traversal_optimal(
    scenario: &Scenario,
    config: &OptimizerConfig,
) -> Result<(Assignment, PhaseConfig, RateReport, OptimizerTrace, Duration)> {
    let count = association_count(scenario);
    if count > config.traversal_limit {
        return Err(Error::TraversalTooLarge { count, limit: config.traversal_limit });
    }
    if config.traversal_mode == TraversalMode::ExhaustivePhases {
        let per_panel = panel_configurations(scenario);
        if per_panel > config.traversal_limit {
            return Err(Error::TraversalTooLarge { count: per_panel, limit: config.traversal_limit });
        }
    }
    let start = Instant::now();
    let eval = Evaluator::new(scenario, eval_options(config, true));
    let choosers: Vec<UserId> = (0..scenario.num_users()).filter(|&u| !scenario.users[u].candidate_bs.is_empty()).collect();
    let directional: Vec<BsId> = (0..scenario.num_base_stations())
        .filter(|&b| scenario.is_directional(b) && scenario.base_stations[b].ris.is_some())
        .collect();
    let mut memo: HashMap<(BsId, Vec<UserId>), Vec<u8>> = HashMap::new();
    let mut digits = vec![0usize; choosers.len()];
    let mut serving: Vec<Option<BsId>> = vec![None; scenario.num_users()];
    let mut trace = OptimizerTrace::start();
    let mut best: Option<(f64, Assignment, PhaseConfig)> = None;

    for n in 0u128.. {
        for (i, &u) in choosers.iter().enumerate() {
            serving[u] = Some(scenario.users[u].candidate_bs[digits[i]]);
        }
        let assignment = Assignment::from_serving(scenario, &serving);
        let mut phases = PhaseConfig::zeros(scenario);
        for &b in &directional {
            let members = assignment.members(b);
            if members.is_empty() {
                continue;
            }
            let panel = memo
                .entry((b, members))
                .or_insert_with(|| optimize_panel(&eval, &assignment, b, config))
                .clone();
            phases.panels[b] = Some(panel);
        }
        let rate = eval.sum_rate(&assignment, &phases);
        if best.as_ref().is_none_or(|(r, _, _)| rate > *r) {
            trace.record(n as usize, rate, 1);
            best = Some((rate, assignment, phases));
        }

        let mut i = 0;
        while i < choosers.len() {
            digits[i] += 1;
            if digits[i] < scenario.users[choosers[i]].candidate_bs.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == choosers.len() {
            break;
        }
    }
    let (_, assignment, phases) = best.expect("at least one association");
    let report = eval.report(&assignment, &phases);
    Ok((assignment, phases, report, trace.finish(Termination::Exhausted), start.elapsed()))
}
