//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod oracle;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcn_ris::channel::{free_space_loss_db, outage_probability, AntennaPattern};
use hcn_ris::optim::{
    bcd_optimize, coalition_game, phase_search, run_algorithm, switch_gain, Algorithm,
    CoalitionState, OptimizerConfig, Termination,
};
use hcn_ris::rates::{average_deviation, jain_fairness, Slot};
use hcn_ris::rng::Domain;
use hcn_ris::scenario::{build_scenario, presets, BsConfig, Scenario, ScenarioConfig};
use hcn_ris::{Assignment, EvalOptions, Evaluator, PhaseConfig};

const SEEDS: u64 = 20;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn rate(s: &Scenario, algorithm: Algorithm, seed: u64) -> f64 {
    run_algorithm(s, algorithm, seed, &OptimizerConfig::default()).unwrap().report.sum_rate
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn bcd_monotone() -> Verdict {
    let config = OptimizerConfig::default();
    let mut bad = Vec::new();
    let mut iterations = 0;
    for seed in 0..SEEDS {
        let s = build_scenario(&presets::default_config(), seed).unwrap();
        let (_, _, _, trace) = bcd_optimize(&s, seed, &config);
        iterations += trace.iterations();
        if !trace.sum_rates().windows(2).all(|w| w[1] >= w[0]) {
            bad.push(seed);
        }
    }
    verdict(bad.is_empty(), format!("{SEEDS} seeds, {iterations} outer iterations, decreasing on {bad:?}"))
}

fn random_layout(rng: &mut ChaCha8Rng) -> ScenarioConfig {
    let mut c = presets::trend_config();
    let keep: Vec<BsConfig> = c.base_stations.iter().filter(|_| rng.random_bool(0.7)).cloned().collect();
    c.base_stations = if keep.len() >= 2 { keep } else { c.base_stations[..2].to_vec() };
    for bs in &mut c.base_stations {
        bs.users = rng.random_range(0..=6);
        bs.num_subchannels = rng.random_range(1..=5);
    }
    c.ris.size = rng.random_range(1..=3);
    c
}

fn coalition_stability() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let config = OptimizerConfig::default();
    let (mut unstable, mut unfinished, mut worst) = (0, 0, 0.0f64);
    let mut built = 0;
    while built < 50 {
        let cfg = random_layout(&mut rng);
        let seed = rng.random::<u64>();
        let Ok(s) = build_scenario(&cfg, seed) else { continue };
        if s.num_users() == 0 || s.num_users() > 60 || s.num_base_stations() > 10 {
            continue;
        }
        built += 1;
        let eval = Evaluator::new(&s, EvalOptions::default());
        let phases = PhaseConfig::random(&s, seed);
        let init = CoalitionState::random(&s, CoalitionState::full_candidates(&s), seed, Domain::InitAssociation, 0);
        let (out, trace) = coalition_game(&eval, &phases, init, &config);
        if trace.termination != Termination::Converged {
            unfinished += 1;
        }
        let total = eval.sum_rate(&out.assignment(&s), &phases);
        // Same floor the game uses to ignore rounding-level gains.
        let floor = 1e-12 * total.max(1.0);
        let mut positive = false;
        for u in 0..s.num_users() {
            let Some(from) = out.serving[u] else { continue };
            for &t in &out.candidates[u] {
                if t != from {
                    let g = switch_gain(&eval, &phases, &out, u, t).unwrap();
                    worst = worst.max(g / total.max(1.0));
                    positive |= g > floor;
                }
            }
        }
        unstable += positive as usize;
    }
    verdict(
        unstable == 0 && unfinished == 0,
        format!("50 instances, {unfinished} not converged, {unstable} with a profitable switch, max relative gain {worst:.1e}"),
    )
}

fn single_mmwave_cell(size: usize, users: usize, seed: u64) -> Scenario {
    let mut c = presets::small_config(0);
    c.base_stations = vec![BsConfig { band: "mmw28".into(), position: [0.0, 0.0], num_subchannels: 2, users }];
    c.ris.size = size;
    c.ris.quant_bits = 3;
    build_scenario(&c, seed).unwrap()
}

fn exhaustive_best(eval: &Evaluator, a: &Assignment, elements: usize) -> f64 {
    let mut phases = PhaseConfig::zeros(eval.scenario);
    let mut best = f64::NEG_INFINITY;
    for code in 0..8usize.pow(elements as u32) {
        let panel = phases.panels[0].as_mut().unwrap();
        let mut c = code;
        for m in panel.iter_mut() {
            *m = (c % 8) as u8;
            c /= 8;
        }
        best = best.max(eval.sum_rate(a, &phases));
    }
    best
}

fn phase_local_optimality() -> Verdict {
    let config = OptimizerConfig::default();
    let mut worst_exact = 0.0f64;
    let mut worst_ratio = f64::INFINITY;
    for i in 0..30u64 {
        for size in [1, 2] {
            let s = single_mmwave_cell(size, 1 + (i % 3) as usize, 100 + i);
            let eval = Evaluator::new(&s, EvalOptions::default());
            let a = Assignment::from_serving(&s, &vec![Some(0); s.num_users()]);
            let (phases, _) = phase_search(&eval, &a, PhaseConfig::random(&s, i), &config);
            let found = eval.sum_rate(&a, &phases);
            let best = exhaustive_best(&eval, &a, size * size);
            if size == 1 {
                worst_exact = worst_exact.max((best - found).abs() / best);
            } else {
                worst_ratio = worst_ratio.min(found / best);
            }
        }
    }
    verdict(
        worst_exact <= 1e-9 && worst_ratio >= 0.99,
        format!("N=1 max relative gap {worst_exact:.1e}, N=2 min ratio {worst_ratio:.6}"),
    )
}

fn traversal_deviation() -> Verdict {
    let config = OptimizerConfig { traversal_limit: 1 << 24, ..Default::default() };
    let mut lines = Vec::new();
    let mut pass = true;
    for n in 1..=6 {
        let (mut pa, mut os) = (Vec::new(), Vec::new());
        let (mut pa_time, mut os_time) = (0.0, 0.0);
        for seed in 0..SEEDS {
            let s = build_scenario(&presets::small_config(n), seed).unwrap();
            let t = Instant::now();
            pa.push(run_algorithm(&s, Algorithm::Pa, seed, &config).unwrap().report.sum_rate);
            pa_time += t.elapsed().as_secs_f64();
            let t = Instant::now();
            os.push(run_algorithm(&s, Algorithm::Os, seed, &config).unwrap().report.sum_rate);
            os_time += t.elapsed().as_secs_f64();
        }
        let dev = average_deviation(&os, &pa).unwrap();
        pass &= dev <= 0.05;
        let mut line = format!("n={n} dev {:.3}%", dev * 100.0);
        if n == 6 {
            let ratio = pa_time / os_time;
            pass &= ratio < 0.01;
            line += &format!(" time ratio {ratio:.4}");
        }
        lines.push(line);
    }
    verdict(pass, lines.join(", "))
}

fn orderings() -> Verdict {
    let (mut pa_cga, mut pa_ro, mut cga_ra, mut ccga_low) = (0, 0, 0, 0);
    let (mut pa_sum, mut cga_sum) = (0.0, 0.0);
    for seed in 0..SEEDS {
        let s = build_scenario(&presets::user_group_config(1), seed).unwrap();
        let [pa, cga, ro, ra, ccga] =
            [Algorithm::Pa, Algorithm::Cga, Algorithm::Ro, Algorithm::Ra, Algorithm::Ccga].map(|a| rate(&s, a, seed));
        pa_cga += (pa >= cga) as u32;
        pa_ro += (pa >= ro) as u32;
        cga_ra += (cga >= ra) as u32;
        ccga_low += (ccga <= pa.min(cga).min(ro)) as u32;
        pa_sum += pa;
        cga_sum += cga;
    }
    let gain = pa_sum / cga_sum - 1.0;
    let counts = [pa_cga, pa_ro, cga_ra, ccga_low];
    verdict(
        counts.iter().all(|&c| c >= 15) && gain >= 0.20,
        format!("PA>=CGA {pa_cga}/20, PA>=RO {pa_ro}/20, CGA>=RA {cga_ra}/20, CCGA lowest {ccga_low}/20, PA over CGA {:+.1}%", gain * 100.0),
    )
}

type Setter = fn(&mut ScenarioConfig, f64);

fn trends() -> Verdict {
    let sweeps: [(&str, Vec<f64>, Setter, bool); 4] = [
        ("N", vec![2.0, 4.0, 6.0, 8.0], |c, v| c.ris.size = v as usize, true),
        ("e", vec![1.0, 2.0, 3.0, 4.0], |c, v| c.ris.quant_bits = v as u32, true),
        ("beta", vec![0.001, 0.005, 0.01], |c, v| c.mmwave_outage_beta = v, false),
        ("theta", vec![30.0, 40.0, 50.0], |c, v| c.half_power_beamwidth_deg = v, false),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (label, values, set, increasing) in sweeps {
        let ris_axis = increasing;
        let constant: &[Algorithm] =
            if ris_axis { &[Algorithm::Cga, Algorithm::Ra, Algorithm::Ccga] } else { &[Algorithm::Ccga] };
        let mut pa = vec![Vec::new(); values.len()];
        let mut ro = vec![Vec::new(); values.len()];
        let mut drift = 0;
        for seed in 0..SEEDS {
            let mut reference: Option<Vec<f64>> = None;
            for (i, &v) in values.iter().enumerate() {
                let mut c = presets::trend_config();
                set(&mut c, v);
                let s = build_scenario(&c, seed).unwrap();
                pa[i].push(rate(&s, Algorithm::Pa, seed));
                ro[i].push(rate(&s, Algorithm::Ro, seed));
                let fixed: Vec<f64> = constant.iter().map(|&a| rate(&s, a, seed)).collect();
                match &reference {
                    None => reference = Some(fixed),
                    Some(r) => drift += (r != &fixed) as usize,
                }
            }
        }
        let pa_mean: Vec<f64> = pa.iter().map(|x| mean(x)).collect();
        let ro_mean: Vec<f64> = ro.iter().map(|x| mean(x)).collect();
        let ordered = |m: &[f64]| {
            if increasing {
                m.windows(2).all(|w| w[1] >= w[0])
            } else {
                m.windows(2).all(|w| w[1] < w[0])
            }
        };
        let ok = ordered(&pa_mean) && ordered(&ro_mean) && drift == 0;
        pass &= ok;
        let fmt = |m: &[f64]| m.iter().map(|x| format!("{:.1}", x / 1e6)).collect::<Vec<_>>().join("/");
        lines.push(format!("{label}: PA {} RO {} Mbit/s, constant-baseline drift {drift}", fmt(&pa_mean), fmt(&ro_mean)));
    }
    verdict(pass, lines.join("; "))
}

fn closed_forms() -> Verdict {
    let p = AntennaPattern::new(30.0);
    let checks = [
        ("G0(30)", p.max_gain_db(), 15.91, 0.01),
        ("Gsl(30)", p.side_lobe_db(), -11.98, 0.01),
        ("Pout(100,0.001)", outage_probability(100.0, 0.001), 0.09516, 1e-5),
        ("FSL(2500MHz,1m)", free_space_loss_db(2500e6, 1.0), 40.41, 0.01),
    ];
    let mut pass = jain_fairness(&[1.0, 0.0, 0.0, 0.0]) == 0.25;
    let mut parts = vec![format!("Jain {}", jain_fairness(&[1.0, 0.0, 0.0, 0.0]))];
    for (name, got, want, tol) in checks {
        pass &= (got - want).abs() <= tol;
        parts.push(format!("{name} {got:.5}"));
    }
    verdict(pass, parts.join(", "))
}

fn oracle_instance(i: u64) -> (Scenario, Assignment, PhaseConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(500 + i);
    let mut c = presets::small_config(0);
    c.base_stations = match i % 3 {
        0 => vec![
            BsConfig { band: "5g1".into(), position: [0.0, 0.0], num_subchannels: 2, users: 0 },
            BsConfig { band: "5g1".into(), position: [300.0, 0.0], num_subchannels: 2, users: 0 },
            BsConfig { band: "4g".into(), position: [150.0, 0.0], num_subchannels: 2, users: 0 },
        ],
        1 => vec![BsConfig { band: "mmw28".into(), position: [0.0, 0.0], num_subchannels: 1, users: 0 }],
        _ => vec![
            BsConfig { band: "mmw27".into(), position: [0.0, 0.0], num_subchannels: 1, users: 0 },
            BsConfig { band: "5g2".into(), position: [100.0, 0.0], num_subchannels: 1, users: 0 },
        ],
    };
    c.ris.size = 1 + (i % 3) as usize;
    c.ris.quant_bits = 1 + (i % 4) as u32;
    c.mmwave_outage_beta = 0.002 * (1 + i % 3) as f64;
    c.half_power_beamwidth_deg = 20.0 + 5.0 * i as f64;
    let users = 1 + (i % 3) as usize;
    c.users = (0..users)
        .map(|_| {
            let r = 120.0 * rng.random::<f64>().sqrt() + 2.0;
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            [r * phi.cos(), r * phi.sin()]
        })
        .collect();
    let s = build_scenario(&c, i).unwrap();
    let slots = s
        .users
        .iter()
        .map(|u| {
            let bs = u.candidate_bs[rng.random_range(0..u.candidate_bs.len())];
            Some(Slot { bs, subchannel: rng.random_range(0..s.base_stations[bs].num_subchannels) })
        })
        .collect();
    let phases = PhaseConfig::random(&s, i);
    (s, Assignment { slots }, phases)
}

fn oracle_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    let mut compared = 0;
    for i in 0..10 {
        let (s, a, phases) = oracle_instance(i);
        let report = Evaluator::new(&s, EvalOptions::default()).evaluate(&a, &phases).unwrap();
        let want = oracle::user_rates(&s, &a, &phases);
        for (got, want) in report.per_user_rate.iter().zip(&want) {
            worst = worst.max((got - want).abs() / want.abs().max(f64::MIN_POSITIVE));
            compared += 1;
        }
        let total: f64 = want.iter().sum();
        worst = worst.max((report.sum_rate - total).abs() / total);
    }
    verdict(worst <= 1e-9, format!("10 instances, {compared} user rates, max relative error {worst:.1e}"))
}

fn fairness_order() -> Verdict {
    let groups = 1..=7usize;
    let (mut pa_cga, mut cga_ra) = (0, 0);
    let mut means = [0.0; 3];
    for seed in 0..SEEDS {
        let mut f = [0.0; 3];
        for g in groups.clone() {
            let s = build_scenario(&presets::user_group_config(g), seed).unwrap();
            for (k, a) in [Algorithm::Pa, Algorithm::Cga, Algorithm::Ra].into_iter().enumerate() {
                f[k] += run_algorithm(&s, a, seed, &OptimizerConfig::default()).unwrap().report.fairness / 7.0;
            }
        }
        pa_cga += (f[0] >= f[1]) as u32;
        cga_ra += (f[1] >= f[2]) as u32;
        for k in 0..3 {
            means[k] += f[k] / SEEDS as f64;
        }
    }
    verdict(
        means[0] >= means[1] && means[1] >= means[2] && pa_cga >= 15 && cga_ra >= 15,
        format!(
            "mean Jain PA {:.4} CGA {:.4} RA {:.4}; PA>=CGA {pa_cga}/20, CGA>=RA {cga_ra}/20",
            means[0], means[1], means[2]
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 bcd monotone", bcd_monotone),
        ("2 coalition stability", coalition_stability),
        ("3 phase search optimality", phase_local_optimality),
        ("4 traversal deviation", traversal_deviation),
        ("5 algorithm ordering", orderings),
        ("6 parameter trends", trends),
        ("7 closed forms", closed_forms),
        ("8 oracle equivalence", oracle_equivalence),
        ("9 fairness ordering", fairness_order),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} ({:.1}s): {}", t.elapsed().as_secs_f64(), v.detail);
        failed += !v.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
