//! Reference algorithms built from the same blocks as BCD.

use super::bcd::{eval_options, initial_state};
use super::coalition::{coalition_game, CoalitionState};
use super::phase::phase_search;
use super::trace::{OptimizerTrace, Termination};
use super::OptimizerConfig;
use crate::rates::{Assignment, Evaluator, PhaseConfig, RateReport};
use crate::rng::Domain;
use crate::scenario::Scenario;
use crate::BsId;

type Solution = (Assignment, PhaseConfig, RateReport, OptimizerTrace);

/// Coalition game with no RIS installed.
pub fn baseline_cga(scenario: &Scenario, seed: u64, config: &OptimizerConfig) -> Solution {
    let eval = Evaluator::new(scenario, eval_options(config, false));
    let phases = PhaseConfig::zeros(scenario);
    let init = initial_state(scenario, CoalitionState::full_candidates(scenario), seed);
    let (state, trace) = coalition_game(&eval, &phases, init, config);
    let assignment = state.assignment(scenario);
    let report = eval.report(&assignment, &phases);
    (assignment, phases, report, trace)
}

/// Random association kept as is; only the phases are optimized.
pub fn baseline_ro(scenario: &Scenario, seed: u64, config: &OptimizerConfig) -> Solution {
    let eval = Evaluator::new(scenario, eval_options(config, true));
    let assignment = initial_state(scenario, CoalitionState::full_candidates(scenario), seed).assignment(scenario);
    let (phases, trace) = phase_search(&eval, &assignment, PhaseConfig::random(scenario, seed), config);
    let report = eval.report(&assignment, &phases);
    (assignment, phases, report, trace)
}

/// Average over independent uniformly random associations without RIS.
/// Returns the first draw's association next to the averaged report.
pub fn baseline_ra(scenario: &Scenario, seed: u64, config: &OptimizerConfig) -> Solution {
    let eval = Evaluator::new(scenario, eval_options(config, false));
    let phases = PhaseConfig::zeros(scenario);
    let draws = config.random_association_draws.max(1);
    let mut trace = OptimizerTrace::start();
    let mut first = None;
    let (n_users, n_bs) = (scenario.num_users(), scenario.num_base_stations());
    let mut per_user = vec![0.0; n_users];
    let mut per_bs = vec![0.0; n_bs];
    let (mut sum_rate, mut fairness) = (0.0, 0.0);
    for draw in 0..draws {
        let state = CoalitionState::random(
            scenario,
            CoalitionState::full_candidates(scenario),
            seed,
            Domain::RandomAssociation,
            draw as u64,
        );
        let assignment = state.assignment(scenario);
        let r = eval.report(&assignment, &phases);
        trace.record(draw, r.sum_rate, 0);
        for (acc, v) in per_user.iter_mut().zip(&r.per_user_rate) {
            *acc += v;
        }
        for (acc, v) in per_bs.iter_mut().zip(&r.per_bs_utility) {
            *acc += v;
        }
        sum_rate += r.sum_rate;
        fairness += r.fairness;
        first.get_or_insert(assignment);
    }
    let n = draws as f64;
    let report = RateReport {
        per_user_rate: per_user.into_iter().map(|v| v / n).collect(),
        per_bs_utility: per_bs.into_iter().map(|v| v / n).collect(),
        sum_rate: sum_rate / n,
        fairness: fairness / n,
    };
    (first.expect("at least one draw"), phases, report, trace.finish(Termination::Exhausted))
}

/// Candidate sets with every directional cell removed.
pub fn mmwave_free_candidates(scenario: &Scenario) -> Vec<Vec<BsId>> {
    scenario
        .users
        .iter()
        .map(|u| u.candidate_bs.iter().copied().filter(|&b| !scenario.is_directional(b)).collect())
        .collect()
}

/// Coalition game restricted to cellular cells; users left without a
/// candidate stay unserved.
pub fn baseline_ccga(scenario: &Scenario, seed: u64, config: &OptimizerConfig) -> Solution {
    let eval = Evaluator::new(scenario, eval_options(config, false));
    let phases = PhaseConfig::zeros(scenario);
    let init = initial_state(scenario, mmwave_free_candidates(scenario), seed);
    let (state, trace) = coalition_game(&eval, &phases, init, config);
    let assignment = state.assignment(scenario);
    let report = eval.report(&assignment, &phases);
    (assignment, phases, report, trace)
}
