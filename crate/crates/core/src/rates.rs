//! Uplink SINR, throughput, coalition utilities and evaluation metrics.
//!
//! Two users interfere when their serving cells share a carrier frequency
//! and they occupy the same sub-channel index. Directional cells use
//! pairwise-distinct carriers, so their interference stays inside one cell.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{self, phase_response};
use crate::error::{Error, Result};
use crate::rng::{self, Domain};
use crate::scenario::Scenario;
use crate::{BsId, UserId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub bs: BsId,
    pub subchannel: usize,
}

/// Serving cell and sub-channel of every user (`None` = no access).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub slots: Vec<Option<Slot>>,
}

impl Assignment {
    pub fn unassigned(num_users: usize) -> Self {
        Self { slots: vec![None; num_users] }
    }

    /// Derives sub-channels from the serving cells: members of a cell take
    /// indices round-robin in ascending user-id order.
    pub fn from_serving(scenario: &Scenario, serving: &[Option<BsId>]) -> Self {
        let mut next = vec![0usize; scenario.num_base_stations()];
        let slots = serving
            .iter()
            .map(|s| {
                s.map(|bs| {
                    let n = scenario.base_stations[bs].num_subchannels;
                    let subchannel = next[bs] % n;
                    next[bs] += 1;
                    Slot { bs, subchannel }
                })
            })
            .collect();
        Self { slots }
    }

    pub fn serving_bs(&self, user: UserId) -> Option<BsId> {
        self.slots[user].map(|s| s.bs)
    }

    pub fn subchannel(&self, user: UserId) -> Option<usize> {
        self.slots[user].map(|s| s.subchannel)
    }

    pub fn serving(&self) -> Vec<Option<BsId>> {
        self.slots.iter().map(|s| s.map(|s| s.bs)).collect()
    }

    /// Users served by `bs`, ascending.
    pub fn members(&self, bs: BsId) -> Vec<UserId> {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some_and(|s| s.bs == bs))
            .map(|(u, _)| u)
            .collect()
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.slots.len() != scenario.num_users() {
            return Err(Error::LengthMismatch { left: self.slots.len(), right: scenario.num_users() });
        }
        for (u, slot) in self.slots.iter().enumerate() {
            let Some(slot) = slot else { continue };
            if !scenario.users[u].candidate_bs.contains(&slot.bs) {
                return Err(Error::Infeasible { user: u, bs: slot.bs });
            }
            if slot.subchannel >= scenario.base_stations[slot.bs].num_subchannels {
                return Err(Error::SubchannelOutOfRange { user: u, bs: slot.bs, subchannel: slot.subchannel });
            }
        }
        Ok(())
    }
}

/// Quantized phase index of every element of every panel (row-major).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseConfig {
    pub panels: Vec<Option<Vec<u8>>>,
}

impl PhaseConfig {
    pub fn zeros(scenario: &Scenario) -> Self {
        Self {
            panels: scenario
                .base_stations
                .iter()
                .map(|bs| bs.ris.as_ref().map(|p| vec![0u8; p.num_elements()]))
                .collect(),
        }
    }

    /// Independent uniform index per element, keyed by `(seed, cell, l_x, l_z)`.
    pub fn random(scenario: &Scenario, seed: u64) -> Self {
        Self {
            panels: scenario
                .base_stations
                .iter()
                .map(|bs| {
                    bs.ris.as_ref().map(|p| {
                        (0..p.num_elements())
                            .map(|k| {
                                let (lx, lz) = p.element_coords(k);
                                rng::pick(seed, Domain::InitPhase, &[bs.bs_id as u64, lx as u64, lz as u64], p.levels())
                                    as u8
                            })
                            .collect()
                    })
                })
                .collect(),
        }
    }

    pub fn panel(&self, bs: BsId) -> Option<&[u8]> {
        self.panels.get(bs).and_then(|p| p.as_deref())
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.panels.len() != scenario.num_base_stations() {
            return Err(Error::LengthMismatch { left: self.panels.len(), right: scenario.num_base_stations() });
        }
        for (bs, panel) in scenario.base_stations.iter().zip(&self.panels) {
            match (&bs.ris, panel) {
                (Some(p), Some(idx)) => {
                    if idx.len() != p.num_elements() || idx.iter().any(|&m| m as usize >= p.levels()) {
                        return Err(Error::InvalidArgument(format!("phase indices of cell {} out of range", bs.bs_id)));
                    }
                }
                (None, None) => {}
                _ => return Err(Error::InvalidArgument(format!("phase panel mismatch at cell {}", bs.bs_id))),
            }
        }
        Ok(())
    }
}

/// Evaluation switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// When false every reflected term is zero (no RIS installed).
    pub ris_enabled: bool,
    /// Multiply the RIS interference term by `k0` like the desired signal.
    pub ris_interference_k0: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { ris_enabled: true, ris_interference_k0: false }
    }
}

impl EvalOptions {
    pub fn without_ris() -> Self {
        Self { ris_enabled: false, ..Self::default() }
    }
}

/// Outcome of one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// bits/s
    pub per_user_rate: Vec<f64>,
    /// Coalition utility of each cell, bits/s.
    pub per_bs_utility: Vec<f64>,
    pub sum_rate: f64,
    pub fairness: f64,
}

impl RateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV record: scenario id, algorithm, sum rate, fairness, then one
    /// column per cell utility.
    pub fn csv_record(&self, scenario_id: &str, algorithm: &str) -> Vec<String> {
        let mut row = vec![
            scenario_id.to_string(),
            algorithm.to_string(),
            self.sum_rate.to_string(),
            self.fairness.to_string(),
        ];
        row.extend(self.per_bs_utility.iter().map(|u| u.to_string()));
        row
    }

    pub fn csv_header(num_bs: usize) -> Vec<String> {
        let mut h: Vec<String> = ["scenario", "algorithm", "sum_rate_bps", "fairness"].map(String::from).to_vec();
        h.extend((0..num_bs).map(|b| format!("bs{b}_utility_bps")));
        h
    }
}

/// Jain's index `(sum R)^2 / (n sum R^2)`. All-zero (or empty) input is
/// treated as perfectly fair and yields 1.
pub fn jain_fairness(values: &[f64]) -> f64 {
    let sum: f64 = values.iter().sum();
    let sq: f64 = values.iter().map(|v| v * v).sum();
    if values.is_empty() || sq == 0.0 {
        return 1.0;
    }
    (sum * sum) / (values.len() as f64 * sq)
}

/// Mean relative shortfall `(R_opt - R) / R_opt` over paired instances.
pub fn average_deviation(optimal: &[f64], method: &[f64]) -> Result<f64> {
    if optimal.len() != method.len() {
        return Err(Error::LengthMismatch { left: optimal.len(), right: method.len() });
    }
    if optimal.is_empty() {
        return Err(Error::InvalidArgument("no instances".into()));
    }
    if let Some(bad) = optimal.iter().find(|&&o| !(o > 0.0)) {
        return Err(Error::InvalidArgument(format!("optimal rate {bad} must be positive")));
    }
    let total: f64 = optimal.iter().zip(method).map(|(o, m)| (o - m) / o).sum();
    Ok(total / optimal.len() as f64)
}

/// Other assigned users sharing `user`'s carrier and sub-channel; for
/// directional cells only those of the same cell.
pub fn cochannel_interferers(scenario: &Scenario, assignment: &Assignment, user: UserId) -> Vec<UserId> {
    let Some(me) = assignment.slots[user] else { return Vec::new() };
    let group = scenario.frequency_group(me.bs);
    let directional = scenario.is_directional(me.bs);
    assignment
        .slots
        .iter()
        .enumerate()
        .filter(|&(v, s)| {
            v != user
                && s.is_some_and(|s| {
                    s.subchannel == me.subchannel
                        && scenario.frequency_group(s.bs) == group
                        && (!directional || s.bs == me.bs)
                })
        })
        .map(|(v, _)| v)
        .collect()
}

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// Rate evaluator bound to one scenario.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'a> {
    pub scenario: &'a Scenario,
    pub options: EvalOptions,
}

impl<'a> Evaluator<'a> {
    pub fn new(scenario: &'a Scenario, options: EvalOptions) -> Self {
        Self { scenario, options }
    }

    /// `sum_k h_k q_k` of `user`'s link into the panel of `bs`.
    pub fn reflected_sum(&self, bs: BsId, user: UserId, phases: &PhaseConfig) -> Complex64 {
        if !self.options.ris_enabled {
            return Complex64::new(0.0, 0.0);
        }
        match (self.scenario.reflect_channels(bs, user), phases.panel(bs), &self.scenario.base_stations[bs].ris) {
            (Some(h), Some(m), Some(panel)) => channel::ris_effective_sum(h, m, panel.quant_bits),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Channel coefficient `F_m = sqrt(l^-u) + sum H` of a directional link.
    pub fn mmwave_coefficient(&self, bs: BsId, user: UserId, phases: &PhaseConfig) -> Complex64 {
        let direct = self.scenario.links.path_gain[bs][user].sqrt();
        if self.options.ris_enabled {
            direct + self.reflected_sum(bs, user, phases)
        } else {
            Complex64::new(direct, 0.0)
        }
    }

    pub fn cellular_sinr(&self, assignment: &Assignment, user: UserId) -> f64 {
        let slot = assignment.slots[user].expect("user is assigned");
        let l = &self.scenario.links;
        let interference: f64 = cochannel_interferers(self.scenario, assignment, user)
            .into_iter()
            .map(|v| l.rx_power_mw[slot.bs][v])
            .sum();
        l.rx_power_mw[slot.bs][user] / (interference + l.noise_mw[slot.bs])
    }

    pub fn mmwave_sinr(&self, assignment: &Assignment, phases: &PhaseConfig, user: UserId) -> f64 {
        let slot = assignment.slots[user].expect("user is assigned");
        let b = slot.bs;
        let s = self.scenario;
        let l = &s.links;
        let pattern = s.antenna();
        let g0 = pattern.gain_linear(0.0);
        let tx = l.tx_mw[b];
        let k0 = l.k0[b];
        let bs_pos = s.base_stations[b].position;
        let me = s.users[user].position;

        let signal = self.mmwave_coefficient(b, user, phases).norm_sqr() * k0 * g0 * g0 * tx;
        let mut p_int = 0.0;
        let mut p_ris = 0.0;
        for v in cochannel_interferers(s, assignment, user) {
            let other = s.users[v].position;
            let g_r = pattern.gain_linear(channel::angle_at(bs_pos, me, other));
            let their_bs = s.base_stations[assignment.slots[v].expect("assigned").bs].position;
            let g_t = pattern.gain_linear(channel::angle_at(other, their_bs, bs_pos));
            p_int += s.mui_factor * k0 * g_t * g_r * l.path_gain[b][v] * tx;
            if self.options.ris_enabled {
                let scale = if self.options.ris_interference_k0 { k0 } else { 1.0 };
                p_ris += self.reflected_sum(b, v, phases).norm_sqr() * g_t * g_r * tx * scale;
            }
        }
        signal / (p_ris + p_int + l.noise_mw[b])
    }

    pub fn sinr(&self, assignment: &Assignment, phases: &PhaseConfig, user: UserId) -> Option<f64> {
        let slot = assignment.slots[user]?;
        Some(if self.scenario.is_directional(slot.bs) {
            self.mmwave_sinr(assignment, phases, user)
        } else {
            self.cellular_sinr(assignment, user)
        })
    }

    /// Uplink throughput in bits/s; zero for unassigned users.
    pub fn user_rate(&self, assignment: &Assignment, phases: &PhaseConfig, user: UserId) -> f64 {
        let Some(slot) = assignment.slots[user] else { return 0.0 };
        let band = self.scenario.band_of(slot.bs);
        let sinr = self.sinr(assignment, phases, user).expect("assigned");
        let rate = band.subchannel_bandwidth_hz * log2_1p(sinr);
        if band.is_mmwave {
            self.scenario.links.keep[slot.bs][user] * rate
        } else {
            rate
        }
    }

    /// Coalition utility of one cell: the summed rate of its members.
    pub fn bs_utility(&self, assignment: &Assignment, phases: &PhaseConfig, bs: BsId) -> f64 {
        assignment
            .slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some_and(|s| s.bs == bs))
            .map(|(u, _)| self.user_rate(assignment, phases, u))
            .sum()
    }

    /// Summed utility of `cells`, taken in the given order.
    pub fn cells_utility(&self, assignment: &Assignment, phases: &PhaseConfig, cells: &[BsId]) -> f64 {
        cells.iter().map(|&b| self.bs_utility(assignment, phases, b)).sum()
    }

    pub fn bs_utilities(&self, assignment: &Assignment, phases: &PhaseConfig) -> Vec<f64> {
        let mut util = vec![0.0; self.scenario.num_base_stations()];
        for (u, slot) in assignment.slots.iter().enumerate() {
            if let Some(slot) = slot {
                util[slot.bs] += self.user_rate(assignment, phases, u);
            }
        }
        util
    }

    /// System sum rate, accumulated cell by cell in id order.
    pub fn sum_rate(&self, assignment: &Assignment, phases: &PhaseConfig) -> f64 {
        self.bs_utilities(assignment, phases).iter().sum()
    }

    /// Full report; rejects infeasible assignments.
    pub fn evaluate(&self, assignment: &Assignment, phases: &PhaseConfig) -> Result<RateReport> {
        assignment.validate(self.scenario)?;
        phases.validate(self.scenario)?;
        Ok(self.report(assignment, phases))
    }

    pub(crate) fn report(&self, assignment: &Assignment, phases: &PhaseConfig) -> RateReport {
        let per_user_rate: Vec<f64> =
            (0..self.scenario.num_users()).map(|u| self.user_rate(assignment, phases, u)).collect();
        let mut per_bs_utility = vec![0.0; self.scenario.num_base_stations()];
        for (u, slot) in assignment.slots.iter().enumerate() {
            if let Some(slot) = slot {
                per_bs_utility[slot.bs] += per_user_rate[u];
            }
        }
        let sum_rate = per_bs_utility.iter().sum();
        let fairness = jain_fairness(&per_bs_utility);
        RateReport { per_user_rate, per_bs_utility, sum_rate, fairness }
    }

    /// Per-link diagnostic rows for every (candidate cell, user) pair.
    pub fn link_diagnostics(&self, phases: &PhaseConfig) -> Vec<LinkDiagnostic> {
        let s = self.scenario;
        let mut rows = Vec::new();
        for user in &s.users {
            for &b in &user.candidate_bs {
                let band = s.band_of(b);
                let gain = s.links.path_gain[b][user.user_id];
                let (ue_gain_db, bs_gain_db, coefficient) = if band.is_mmwave {
                    let g0 = s.antenna().max_gain_db();
                    (g0, g0, self.mmwave_coefficient(b, user.user_id, phases).norm())
                } else {
                    (band.ue_gain_dbi, band.bs_gain_dbi, gain.sqrt())
                };
                rows.push(LinkDiagnostic {
                    bs: b,
                    user: user.user_id,
                    distance_m: s.distance(b, user.user_id),
                    loss_db: -channel::linear_to_db(gain),
                    ue_gain_db,
                    bs_gain_db,
                    coefficient_abs: coefficient,
                });
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkDiagnostic {
    pub bs: BsId,
    pub user: UserId,
    pub distance_m: f64,
    pub loss_db: f64,
    pub ue_gain_db: f64,
    pub bs_gain_db: f64,
    /// `|F_m|` for directional links, `sqrt(l^-u)` otherwise.
    pub coefficient_abs: f64,
}

/// Writes [`LinkDiagnostic`] rows as CSV.
pub fn write_link_diagnostics<W: std::io::Write>(rows: &[LinkDiagnostic], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Unit phase response vector of a panel, for callers that cache it.
pub fn panel_response(indices: &[u8], bits: u32) -> Vec<Complex64> {
    indices.iter().map(|&m| phase_response(m, bits)).collect()
}
