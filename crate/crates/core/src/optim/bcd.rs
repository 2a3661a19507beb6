//! Block coordinate descent over (association, phases).

use super::coalition::{coalition_game, CoalitionState};
use super::phase::phase_search;
use super::trace::{OptimizerTrace, Termination};
use super::OptimizerConfig;
use crate::rates::{Assignment, EvalOptions, Evaluator, PhaseConfig, RateReport};
use crate::rng::Domain;
use crate::scenario::Scenario;

/// Random initial partition shared by every coalition-based algorithm.
pub(crate) fn initial_state(scenario: &Scenario, candidates: Vec<Vec<usize>>, seed: u64) -> CoalitionState {
    CoalitionState::random(scenario, candidates, seed, Domain::InitAssociation, 0)
}

pub(crate) fn eval_options(config: &OptimizerConfig, ris: bool) -> EvalOptions {
    EvalOptions { ris_enabled: ris, ris_interference_k0: config.ris_interference_k0 }
}

/// Alternates the coalition game (phases fixed) and the phase search
/// (association fixed) from a random start until the relative improvement
/// of an outer iteration falls below `xi`.
pub fn bcd_optimize(
    scenario: &Scenario,
    seed: u64,
    config: &OptimizerConfig,
) -> (Assignment, PhaseConfig, RateReport, OptimizerTrace) {
    let eval = Evaluator::new(scenario, eval_options(config, true));
    let mut state = initial_state(scenario, CoalitionState::full_candidates(scenario), seed);
    let mut phases = PhaseConfig::random(scenario, seed);
    let mut trace = OptimizerTrace::start();
    let mut rate = eval.sum_rate(&state.assignment(scenario), &phases);
    trace.record(0, rate, 0);
    let mut termination = Termination::IterationCap;
    for iteration in 1..=config.max_outer_iterations {
        let (next, game) = coalition_game(&eval, &phases, state, config);
        state = next;
        let assignment = state.assignment(scenario);
        let (next_phases, search) = phase_search(&eval, &assignment, phases, config);
        phases = next_phases;
        let next_rate = eval.sum_rate(&assignment, &phases);
        trace.record(iteration, next_rate, game.total_switches() + search.total_switches());
        let improvement = next_rate - rate;
        let relative = if rate > 0.0 { improvement / rate } else if improvement > 0.0 { f64::INFINITY } else { 0.0 };
        rate = next_rate;
        if relative < config.xi {
            termination = Termination::Converged;
            break;
        }
    }
    let assignment = state.assignment(scenario);
    let report = eval.report(&assignment, &phases);
    (assignment, phases, report, trace.finish(termination))
}
