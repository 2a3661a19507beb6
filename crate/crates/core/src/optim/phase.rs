//! Element-by-element discrete search over RIS phase indices.

use super::trace::{OptimizerTrace, Termination};
use super::OptimizerConfig;
use crate::rates::{Assignment, Evaluator, PhaseConfig};
use crate::BsId;

/// Panels worth searching: directional cells with a RIS and at least one member.
pub(crate) fn active_panels(eval: &Evaluator, assignment: &Assignment, phases: &PhaseConfig) -> Vec<BsId> {
    if !eval.options.ris_enabled {
        return Vec::new();
    }
    let s = eval.scenario;
    (0..s.num_base_stations())
        .filter(|&b| s.is_directional(b) && phases.panel(b).is_some())
        .filter(|&b| assignment.slots.iter().any(|slot| slot.is_some_and(|slot| slot.bs == b)))
        .collect()
}

/// One sweep over the elements of the panel at `bs`, row-major. Each element
/// takes the index maximizing the cell's utility with the others fixed
/// (smallest index on ties). Returns the number of changed elements and the
/// utility afterwards.
pub(crate) fn sweep_panel(
    eval: &Evaluator,
    assignment: &Assignment,
    phases: &mut PhaseConfig,
    bs: BsId,
    mut utility: f64,
) -> (usize, f64) {
    let levels = eval.scenario.base_stations[bs].ris.as_ref().expect("panel").levels();
    let elements = phases.panel(bs).expect("panel").len();
    let mut changes = 0;
    for k in 0..elements {
        let current = phases.panels[bs].as_ref().expect("panel")[k];
        let (mut best_m, mut best_u) = (current, utility);
        for m in 0..levels as u8 {
            if m == current {
                continue;
            }
            phases.panels[bs].as_mut().expect("panel")[k] = m;
            let u = eval.bs_utility(assignment, phases, bs);
            if u > best_u || (u == best_u && m < best_m) {
                best_m = m;
                best_u = u;
            }
        }
        phases.panels[bs].as_mut().expect("panel")[k] = best_m;
        if best_m != current {
            changes += 1;
        }
        utility = best_u;
    }
    (changes, utility)
}

/// Local discrete phase search with the association fixed. Panels are
/// independent (directional interference stays inside a cell), so each one
/// is swept until its utility moves by less than `epsilon`.
pub fn phase_search(
    eval: &Evaluator,
    assignment: &Assignment,
    init: PhaseConfig,
    config: &OptimizerConfig,
) -> (PhaseConfig, OptimizerTrace) {
    let mut phases = init;
    let mut trace = OptimizerTrace::start();
    trace.record(0, eval.sum_rate(assignment, &phases), 0);
    let panels = active_panels(eval, assignment, &phases);
    if panels.is_empty() {
        return (phases, trace.finish(Termination::Trivial));
    }
    let mut utility: Vec<f64> = panels.iter().map(|&b| eval.bs_utility(assignment, &phases, b)).collect();
    let mut open = vec![true; panels.len()];
    for sweep in 1..=config.max_sweeps {
        let mut changes = 0;
        for (i, &b) in panels.iter().enumerate() {
            if !open[i] {
                continue;
            }
            let (c, after) = sweep_panel(eval, assignment, &mut phases, b, utility[i]);
            changes += c;
            if (after - utility[i]).abs() < config.epsilon {
                open[i] = false;
            }
            utility[i] = after;
        }
        trace.record(sweep, eval.sum_rate(assignment, &phases), changes);
        if open.iter().all(|o| !o) {
            return (phases, trace.finish(Termination::Converged));
        }
    }
    (phases, trace.finish(Termination::IterationCap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::EvalOptions;
    use crate::scenario::{build_scenario, presets, BsConfig, Scenario};

    fn mmwave_cell(size: usize, bits: u32, users: Vec<[f64; 2]>, seed: u64) -> Scenario {
        let mut cfg = presets::small_config(0);
        cfg.base_stations =
            vec![BsConfig { band: "mmw28".into(), position: [0.0, 0.0], num_subchannels: 2, users: 0 }];
        cfg.users = users;
        cfg.ris.size = size;
        cfg.ris.quant_bits = bits;
        build_scenario(&cfg, seed).unwrap()
    }

    #[test]
    fn single_element_matches_brute_force() {
        for seed in 0..10 {
            let s = mmwave_cell(1, 3, vec![[60.0, 40.0]], seed);
            let eval = Evaluator::new(&s, EvalOptions::default());
            let a = Assignment::from_serving(&s, &[Some(0)]);
            let (out, _) = phase_search(&eval, &a, PhaseConfig::zeros(&s), &OptimizerConfig::default());
            let mut best = (f64::NEG_INFINITY, 0u8);
            for m in 0..8u8 {
                let p = PhaseConfig { panels: vec![Some(vec![m])] };
                let r = eval.sum_rate(&a, &p);
                if r > best.0 {
                    best = (r, m);
                }
            }
            assert_eq!(out.panels[0].as_ref().unwrap()[0], best.1, "seed {seed}");
        }
    }

    #[test]
    fn optimal_start_is_a_fixed_point() {
        let s = mmwave_cell(2, 3, vec![[60.0, 40.0], [-30.0, 80.0], [10.0, -90.0]], 3);
        let eval = Evaluator::new(&s, EvalOptions::default());
        let a = Assignment::from_serving(&s, &[Some(0), Some(0), Some(0)]);
        let cfg = OptimizerConfig::default();
        let (first, _) = phase_search(&eval, &a, PhaseConfig::zeros(&s), &cfg);
        let (again, trace) = phase_search(&eval, &a, first.clone(), &cfg);
        assert_eq!(again, first);
        assert_eq!(trace.iterations(), 1);
        assert_eq!(trace.total_switches(), 0);
    }

    #[test]
    fn one_bit_panels_cannot_change_rate() {
        let s = mmwave_cell(2, 1, vec![[60.0, 40.0], [-30.0, 80.0]], 4);
        let eval = Evaluator::new(&s, EvalOptions::default());
        let a = Assignment::from_serving(&s, &[Some(0), Some(0)]);
        let init = PhaseConfig::random(&s, 4);
        let before = eval.sum_rate(&a, &init);
        let (out, _) = phase_search(&eval, &a, init, &OptimizerConfig::default());
        assert_eq!(eval.sum_rate(&a, &out), before);
    }

    #[test]
    fn sweeps_never_lower_the_rate() {
        let s = build_scenario(&presets::user_group_config(3), 21).unwrap();
        let eval = Evaluator::new(&s, EvalOptions::default());
        let serving: Vec<_> = s.users.iter().map(|u| Some(*u.candidate_bs.last().unwrap())).collect();
        let a = Assignment::from_serving(&s, &serving);
        let (_, trace) = phase_search(&eval, &a, PhaseConfig::random(&s, 21), &OptimizerConfig::default());
        assert!(trace.is_non_decreasing());
        assert_eq!(trace.termination, Termination::Converged);
    }

    #[test]
    fn disabled_ris_is_a_no_op() {
        let s = mmwave_cell(2, 3, vec![[60.0, 40.0]], 1);
        let eval = Evaluator::new(&s, EvalOptions::without_ris());
        let a = Assignment::from_serving(&s, &[Some(0)]);
        let init = PhaseConfig::random(&s, 1);
        let (out, trace) = phase_search(&eval, &a, init.clone(), &OptimizerConfig::default());
        assert_eq!(out, init);
        assert_eq!(trace.termination, Termination::Trivial);
    }
}
