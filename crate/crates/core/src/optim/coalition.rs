//! Transferable-utility coalition formation over serving cells.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::trace::{OptimizerTrace, Termination};
use super::OptimizerConfig;
use crate::error::{Error, Result};
use crate::rates::{Assignment, Evaluator, PhaseConfig};
use crate::rng::{self, Domain};
use crate::scenario::Scenario;
use crate::{BsId, UserId};

/// Relative margin a switch must clear to count as an improvement.
pub const SWITCH_TOLERANCE: f64 = 1e-12;

/// Partition of the users into per-cell coalitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalitionState {
    pub serving: Vec<Option<BsId>>,
    /// Cells each user may join, ascending.
    pub candidates: Vec<Vec<BsId>>,
}

impl CoalitionState {
    pub fn new(serving: Vec<Option<BsId>>, candidates: Vec<Vec<BsId>>) -> Result<Self> {
        if serving.len() != candidates.len() {
            return Err(Error::LengthMismatch { left: serving.len(), right: candidates.len() });
        }
        for (u, (s, c)) in serving.iter().zip(&candidates).enumerate() {
            if let Some(bs) = s {
                if !c.contains(bs) {
                    return Err(Error::Infeasible { user: u, bs: *bs });
                }
            }
        }
        Ok(Self { serving, candidates })
    }

    /// Every user with at least one candidate joins one uniformly at random,
    /// keyed by the user's draw key.
    pub fn random(scenario: &Scenario, candidates: Vec<Vec<BsId>>, seed: u64, domain: Domain, draw: u64) -> Self {
        let serving = scenario
            .users
            .iter()
            .zip(&candidates)
            .map(|(u, c)| {
                (!c.is_empty()).then(|| c[rng::pick(seed, domain, &[draw, u.draw_key], c.len())])
            })
            .collect();
        Self { serving, candidates }
    }

    pub fn full_candidates(scenario: &Scenario) -> Vec<Vec<BsId>> {
        scenario.users.iter().map(|u| u.candidate_bs.clone()).collect()
    }

    pub fn assignment(&self, scenario: &Scenario) -> Assignment {
        Assignment::from_serving(scenario, &self.serving)
    }

    /// Members of each cell, ascending user id.
    pub fn coalitions(&self, num_bs: usize) -> Vec<Vec<UserId>> {
        let mut c = vec![Vec::new(); num_bs];
        for (u, s) in self.serving.iter().enumerate() {
            if let Some(bs) = s {
                c[*bs].push(u);
            }
        }
        c
    }
}

/// Cells whose utilities a move between `from` and `to` can change: every
/// cell sharing a carrier with either end.
fn affected_cells(scenario: &Scenario, from: BsId, to: BsId) -> Vec<BsId> {
    let (gf, gt) = (scenario.frequency_group(from), scenario.frequency_group(to));
    (0..scenario.num_base_stations())
        .filter(|&b| {
            let g = scenario.frequency_group(b);
            g == gf || g == gt
        })
        .collect()
}

/// `(before, after)` utility of the affected cells when `user` moves to `target`.
fn switch_utilities(
    eval: &Evaluator,
    phases: &PhaseConfig,
    state: &CoalitionState,
    current: &Assignment,
    user: UserId,
    from: BsId,
    target: BsId,
) -> (f64, f64) {
    let s = eval.scenario;
    let cells = affected_cells(s, from, target);
    let before = eval.cells_utility(current, phases, &cells);
    let mut serving = state.serving.clone();
    serving[user] = Some(target);
    let moved = Assignment::from_serving(s, &serving);
    let after = eval.cells_utility(&moved, phases, &cells);
    (before, after)
}

/// Change of system utility if `user` leaves its coalition for `target`.
/// Positive means the user prefers `target`.
pub fn switch_gain(
    eval: &Evaluator,
    phases: &PhaseConfig,
    state: &CoalitionState,
    user: UserId,
    target: BsId,
) -> Result<f64> {
    if !state.candidates[user].contains(&target) {
        return Err(Error::Infeasible { user, bs: target });
    }
    let from = state.serving[user]
        .ok_or_else(|| Error::InvalidArgument(format!("user {user} is not in any coalition")))?;
    if from == target {
        return Err(Error::InvalidArgument(format!("user {user} already belongs to cell {target}")));
    }
    let current = state.assignment(eval.scenario);
    let (before, after) = switch_utilities(eval, phases, state, &current, user, from, target);
    Ok(after - before)
}

/// Lets users switch coalitions, in user-id order, towards the largest
/// strictly positive gain until a round no longer beats the best of the
/// previous rounds.
pub fn coalition_game(
    eval: &Evaluator,
    phases: &PhaseConfig,
    init: CoalitionState,
    config: &OptimizerConfig,
) -> (CoalitionState, OptimizerTrace) {
    let s = eval.scenario;
    let mut state = init;
    let mut assignment = state.assignment(s);
    let mut trace = OptimizerTrace::start();
    let mut utility = eval.sum_rate(&assignment, phases);
    trace.record(0, utility, 0);
    let mut history: VecDeque<f64> = VecDeque::from([utility]);
    let window = config.history_window.max(1);

    for round in 1..=config.max_rounds {
        let mut switches = 0;
        for user in 0..s.num_users() {
            let Some(from) = state.serving[user] else { continue };
            let mut best: Option<(f64, BsId)> = None;
            for &target in &state.candidates[user] {
                if target == from {
                    continue;
                }
                let (before, after) = switch_utilities(eval, phases, &state, &assignment, user, from, target);
                let gain = after - before;
                if gain > SWITCH_TOLERANCE * before.abs().max(1.0) && best.is_none_or(|(g, _)| gain > g) {
                    best = Some((gain, target));
                }
            }
            if let Some((_, target)) = best {
                state.serving[user] = Some(target);
                assignment = state.assignment(s);
                switches += 1;
            }
        }
        utility = eval.sum_rate(&assignment, phases);
        trace.record(round, utility, switches);
        if switches == 0 {
            return (state, trace.finish(Termination::Converged));
        }
        let best_previous = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if utility <= best_previous {
            return (state, trace.finish(Termination::NoImprovement));
        }
        history.push_back(utility);
        if history.len() > window {
            history.pop_front();
        }
    }
    (state, trace.finish(Termination::IterationCap))
}
