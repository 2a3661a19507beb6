//! World model: band profiles, base stations, users, RIS panels, and the
//! frozen random draws of one scenario instance.

pub mod config;
pub mod presets;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

pub use config::{BsConfig, LosPhaseMode, NlosLaw, RisConfig, ScenarioConfig};

use crate::channel::{self, AntennaPattern, RicianParams};
use crate::error::{Error, Result};
use crate::rng::{self, Domain};
use crate::{BsId, UserId};

/// Radio constants of one network type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandProfile {
    pub band_id: String,
    pub frequency_hz: f64,
    pub subchannel_bandwidth_hz: f64,
    pub tx_power_dbm: f64,
    pub noise_density_dbm_per_hz: f64,
    pub path_loss_exponent: f64,
    /// Fixed UE antenna gain; ignored by directional bands.
    pub ue_gain_dbi: f64,
    /// Fixed BS antenna gain; ignored by directional bands.
    pub bs_gain_dbi: f64,
    pub coverage_radius_m: f64,
    pub shadow_sigma_db: f64,
    /// Directional antennas, RIS and blockage outage apply.
    pub is_mmwave: bool,
    /// Second-order channel statistic `A_t` of cellular links.
    #[serde(default = "unit")]
    pub channel_constant: f64,
}

fn unit() -> f64 {
    1.0
}

impl BandProfile {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("band {:?}: {what}", self.band_id)));
        if !(self.frequency_hz > 0.0) {
            return bad("frequency_hz must be positive");
        }
        if !(self.subchannel_bandwidth_hz > 0.0) {
            return bad("subchannel_bandwidth_hz must be positive");
        }
        if !(self.coverage_radius_m > 0.0) {
            return bad("coverage_radius_m must be positive");
        }
        if !(self.path_loss_exponent >= 1.0) {
            return bad("path_loss_exponent must be at least 1");
        }
        if !(self.shadow_sigma_db >= 0.0) {
            return bad("shadow_sigma_db must be non-negative");
        }
        if !(self.channel_constant >= 0.0) {
            return bad("channel_constant must be non-negative");
        }
        if ![self.tx_power_dbm, self.noise_density_dbm_per_hz, self.ue_gain_dbi, self.bs_gain_dbi]
            .iter()
            .all(|v| v.is_finite())
        {
            return bad("power and gain figures must be finite");
        }
        Ok(())
    }
}

/// `N × N` panel mounted on the coverage boundary of its host cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisPanel {
    pub size: usize,
    pub quant_bits: u32,
    pub element_spacing_m: f64,
    /// Host base station position.
    pub anchor: [f64; 2],
    /// Host coverage radius.
    pub radius_m: f64,
    pub rician_factor: f64,
    pub los_exponent: f64,
    pub nlos_exponent: f64,
}

impl RisPanel {
    pub fn num_elements(&self) -> usize {
        self.size * self.size
    }

    pub fn levels(&self) -> usize {
        channel::phase_levels(self.quant_bits)
    }

    /// Row-major index of element `(l_x, l_z)`, both 1-based.
    pub fn element_index(&self, l_x: usize, l_z: usize) -> usize {
        assert!(
            (1..=self.size).contains(&l_x) && (1..=self.size).contains(&l_z),
            "RIS element ({l_x}, {l_z}) outside a {n}x{n} panel",
            n = self.size
        );
        (l_x - 1) * self.size + (l_z - 1)
    }

    /// `(l_x, l_z)` of a row-major index.
    pub fn element_coords(&self, index: usize) -> (usize, usize) {
        (index / self.size + 1, index % self.size + 1)
    }

    pub fn rician(&self) -> RicianParams {
        RicianParams {
            k_factor: self.rician_factor,
            los_exponent: self.los_exponent,
            nlos_exponent: self.nlos_exponent,
        }
    }
}

/// 3-D position of element `(l_x, l_z)` (1-based). Users and base stations
/// live in the `z = 0` plane.
pub fn ris_element_position(panel: &RisPanel, l_x: usize, l_z: usize) -> [f64; 3] {
    assert!(
        (1..=panel.size).contains(&l_x) && (1..=panel.size).contains(&l_z),
        "RIS element ({l_x}, {l_z}) outside a {n}x{n} panel",
        n = panel.size
    );
    let d = panel.element_spacing_m;
    let half = panel.size as f64 / 2.0;
    [
        panel.anchor[0] - d * (half + 1.0) + d * l_x as f64,
        panel.anchor[1] - panel.radius_m,
        d * l_z as f64,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    pub bs_id: BsId,
    /// Index into [`Scenario::bands`].
    pub band: usize,
    pub position: [f64; 2],
    pub num_subchannels: usize,
    pub ris: Option<RisPanel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub user_id: UserId,
    pub position: [f64; 2],
    /// Cells whose closed coverage disk contains the user, ascending.
    pub candidate_bs: Vec<BsId>,
    /// Stable key of this user's random draws.
    pub draw_key: u64,
}

/// Frozen random draws, indexed `[bs][user]` (and `[element]` for RIS terms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingTable {
    /// Shadow fading `X_sigma` in dB.
    pub shadow_db: Vec<Vec<f64>>,
    /// `|h0|^2` of the direct link.
    pub direct_smallscale: Vec<Vec<f64>>,
    /// NLoS coefficients of the user → element → host links, row-major elements.
    pub ris_nlos: Vec<Option<Vec<Vec<Complex64>>>>,
    /// LoS phase `theta'` of each user → element → host link, row-major elements.
    pub los_phase: Vec<Option<Vec<Vec<f64>>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Links shorter than the reference distance (clamped in the loss model).
    pub clamped_links: usize,
}

/// Derived linear-scale quantities. Rebuilt from the scenario data.
#[derive(Debug, Clone, Default)]
pub(crate) struct LinkBudget {
    pub distance: Vec<Vec<f64>>,
    /// `10^(-L(d)/10)` including shadowing.
    pub path_gain: Vec<Vec<f64>>,
    /// Cellular received power (mW) `A_t |h0|^2 G_u G_b l^-u P`.
    pub rx_power_mw: Vec<Vec<f64>>,
    /// Cascaded reflect channels `[bs][user][element]`.
    pub reflect: Vec<Option<Vec<Vec<Complex64>>>>,
    /// `1 - P_out` of each directional link.
    pub keep: Vec<Vec<f64>>,
    pub noise_mw: Vec<f64>,
    pub tx_mw: Vec<f64>,
    pub k0: Vec<f64>,
    /// Cells sharing a carrier frequency share a group id.
    pub freq_group: Vec<usize>,
    pub num_groups: usize,
    pub pattern: Option<AntennaPattern>,
    pub clamped_links: usize,
}

/// A frozen network instance. Immutable after construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ScenarioData")]
pub struct Scenario {
    pub name: String,
    pub bands: Vec<BandProfile>,
    pub base_stations: Vec<BaseStation>,
    pub users: Vec<User>,
    pub fading: FadingTable,
    pub seed: u64,
    pub mmwave_outage_beta: f64,
    pub mui_factor: f64,
    pub half_power_beamwidth_deg: f64,
    pub diagnostics: Diagnostics,
    #[serde(skip)]
    pub(crate) links: LinkBudget,
}

#[derive(Deserialize)]
struct ScenarioData {
    name: String,
    bands: Vec<BandProfile>,
    base_stations: Vec<BaseStation>,
    users: Vec<User>,
    fading: FadingTable,
    seed: u64,
    mmwave_outage_beta: f64,
    mui_factor: f64,
    half_power_beamwidth_deg: f64,
}

impl TryFrom<ScenarioData> for Scenario {
    type Error = Error;

    fn try_from(d: ScenarioData) -> Result<Self> {
        let mut s = Scenario {
            name: d.name,
            bands: d.bands,
            base_stations: d.base_stations,
            users: d.users,
            fading: d.fading,
            seed: d.seed,
            mmwave_outage_beta: d.mmwave_outage_beta,
            mui_factor: d.mui_factor,
            half_power_beamwidth_deg: d.half_power_beamwidth_deg,
            diagnostics: Diagnostics::default(),
            links: LinkBudget::default(),
        };
        s.check_tables()?;
        s.rebuild_links();
        Ok(s)
    }
}

impl Scenario {
    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_base_stations(&self) -> usize {
        self.base_stations.len()
    }

    pub fn band_of(&self, bs: BsId) -> &BandProfile {
        &self.bands[self.base_stations[bs].band]
    }

    pub fn is_directional(&self, bs: BsId) -> bool {
        self.band_of(bs).is_mmwave
    }

    pub fn distance(&self, bs: BsId, user: UserId) -> f64 {
        self.links.distance[bs][user]
    }

    /// Carrier-frequency group of a cell.
    pub fn frequency_group(&self, bs: BsId) -> usize {
        self.links.freq_group[bs]
    }

    pub fn num_frequency_groups(&self) -> usize {
        self.links.num_groups
    }

    pub fn antenna(&self) -> AntennaPattern {
        self.links.pattern.unwrap_or_else(|| AntennaPattern::new(self.half_power_beamwidth_deg))
    }

    /// Reflect channels of `user`'s link into `bs` through its panel.
    pub fn reflect_channels(&self, bs: BsId, user: UserId) -> Option<&[Complex64]> {
        self.links.reflect[bs].as_ref().map(|per_user| per_user[user].as_slice())
    }

    /// Canonical JSON form (stable field order, shortest round-trip floats).
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn check_tables(&self) -> Result<()> {
        let (nb, nu) = (self.base_stations.len(), self.users.len());
        let f = &self.fading;
        let square = |t: &Vec<Vec<f64>>| t.len() == nb && t.iter().all(|r| r.len() == nu);
        if !square(&f.shadow_db) || !square(&f.direct_smallscale) || f.ris_nlos.len() != nb || f.los_phase.len() != nb
        {
            return Err(Error::Config("fading table does not match the scenario size".into()));
        }
        for (b, bs) in self.base_stations.iter().enumerate() {
            if bs.band >= self.bands.len() {
                return Err(Error::Config(format!("base station {b}: band index out of range")));
            }
            match (&bs.ris, &f.ris_nlos[b], &f.los_phase[b]) {
                (Some(panel), Some(nlos), Some(phase)) => {
                    let n = panel.num_elements();
                    if nlos.len() != nu
                        || phase.len() != nu
                        || nlos.iter().any(|e| e.len() != n)
                        || phase.iter().any(|e| e.len() != n)
                    {
                        return Err(Error::Config(format!("base station {b}: RIS draws do not match the panel")));
                    }
                }
                (None, None, None) => {}
                _ => return Err(Error::Config(format!("base station {b}: RIS draws do not match the panel"))),
            }
        }
        Ok(())
    }

    fn rebuild_links(&mut self) {
        let nb = self.base_stations.len();
        let nu = self.users.len();
        let mut lb = LinkBudget {
            distance: vec![vec![0.0; nu]; nb],
            path_gain: vec![vec![0.0; nu]; nb],
            rx_power_mw: vec![vec![0.0; nu]; nb],
            reflect: vec![None; nb],
            keep: vec![vec![1.0; nu]; nb],
            noise_mw: vec![0.0; nb],
            tx_mw: vec![0.0; nb],
            k0: vec![0.0; nb],
            freq_group: vec![0; nb],
            num_groups: 0,
            pattern: Some(AntennaPattern::new(self.half_power_beamwidth_deg)),
            clamped_links: 0,
        };

        let mut group_freqs: Vec<f64> = Vec::new();
        for (b, bs) in self.base_stations.iter().enumerate() {
            let band = &self.bands[bs.band];
            lb.freq_group[b] = match group_freqs.iter().position(|&f| f == band.frequency_hz) {
                Some(g) => g,
                None => {
                    group_freqs.push(band.frequency_hz);
                    group_freqs.len() - 1
                }
            };
            lb.noise_mw[b] = channel::dbm_to_mw(band.noise_density_dbm_per_hz) * band.subchannel_bandwidth_hz;
            lb.tx_mw[b] = channel::dbm_to_mw(band.tx_power_dbm);
            lb.k0[b] = channel::wavelength_factor(band.frequency_hz);
            let fixed_gains = channel::db_to_linear(band.ue_gain_dbi + band.bs_gain_dbi);

            for (u, user) in self.users.iter().enumerate() {
                let d = (user.position[0] - bs.position[0]).hypot(user.position[1] - bs.position[1]);
                if channel::is_clamped(d) {
                    lb.clamped_links += 1;
                }
                let loss = channel::path_loss_db(
                    band.frequency_hz,
                    band.path_loss_exponent,
                    d,
                    self.fading.shadow_db[b][u],
                );
                let gain = channel::db_to_linear(-loss);
                lb.distance[b][u] = d;
                lb.path_gain[b][u] = gain;
                if band.is_mmwave {
                    lb.keep[b][u] = 1.0 - channel::outage_probability(d, self.mmwave_outage_beta);
                } else {
                    lb.rx_power_mw[b][u] = band.channel_constant
                        * self.fading.direct_smallscale[b][u]
                        * fixed_gains
                        * gain
                        * lb.tx_mw[b];
                }
            }

            if let (Some(panel), Some(nlos), Some(phase)) = (&bs.ris, &self.fading.ris_nlos[b], &self.fading.los_phase[b])
            {
                let params = panel.rician();
                let bs_pos = [bs.position[0], bs.position[1], 0.0];
                let elements: Vec<[f64; 3]> = (0..panel.num_elements())
                    .map(|k| {
                        let (lx, lz) = panel.element_coords(k);
                        ris_element_position(panel, lx, lz)
                    })
                    .collect();
                let per_user = self
                    .users
                    .iter()
                    .enumerate()
                    .map(|(u, user)| {
                        let ue = [user.position[0], user.position[1], 0.0];
                        elements
                            .iter()
                            .enumerate()
                            .map(|(k, &el)| channel::ris_reflect_channel(&params, el, ue, bs_pos, nlos[u][k], phase[u][k]))
                            .collect()
                    })
                    .collect();
                lb.reflect[b] = Some(per_user);
            }
        }
        lb.num_groups = group_freqs.len();
        self.diagnostics.clamped_links = lb.clamped_links;
        self.links = lb;
    }
}

fn user_in_disk(seed: u64, bs: usize, k: usize, center: [f64; 2], radius: f64) -> [f64; 2] {
    let mut r = rng::stream(seed, Domain::UserPlacement, &[bs as u64, k as u64]);
    let rho = radius * r.random::<f64>().sqrt();
    let phi = 2.0 * std::f64::consts::PI * r.random::<f64>();
    [center[0] + rho * phi.cos(), center[1] + rho * phi.sin()]
}

fn complex_gaussian<R: Rng>(r: &mut R) -> Complex64 {
    let n = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    Complex64::new(n.sample(r), n.sample(r))
}

fn nlos_draw(seed: u64, law: NlosLaw, ids: &[u64]) -> Complex64 {
    let mut r = rng::stream(seed, Domain::RisNlos, ids);
    match law {
        NlosLaw::ComplexGaussian => complex_gaussian(&mut r),
        NlosLaw::Nakagami { m, omega } => {
            let power = Gamma::new(m, omega / m).expect("valid gamma").sample(&mut r);
            let phase = 2.0 * std::f64::consts::PI * r.random::<f64>();
            Complex64::from_polar(power.sqrt(), phase)
        }
    }
}

/// Builds a scenario from its configuration. Pure in `(config, seed)`.
pub fn build_scenario(config: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    config.validate()?;

    let mut positions: Vec<([f64; 2], u64)> = config
        .users
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u64))
        .collect();
    if let Some(bad) = positions.iter().position(|(p, _)| !p.iter().all(|c| c.is_finite())) {
        return Err(Error::Config(format!("user {bad}: non-finite position")));
    }
    for (b, bs) in config.base_stations.iter().enumerate() {
        let radius = config.band(&bs.band).expect("validated").coverage_radius_m;
        for k in 0..bs.users {
            let key = ((b as u64 + 1) << 32) | k as u64;
            positions.push((user_in_disk(seed, b, k, bs.position, radius), key));
        }
    }

    let mut base_stations = Vec::with_capacity(config.base_stations.len());
    for (b, bs) in config.base_stations.iter().enumerate() {
        let band_idx = config.band_index(&bs.band).expect("validated");
        let band = &config.bands[band_idx];
        let ris = band.is_mmwave.then_some(RisPanel {
            size: config.ris.size,
            quant_bits: config.ris.quant_bits,
            element_spacing_m: config.ris.element_spacing_m,
            anchor: bs.position,
            radius_m: band.coverage_radius_m,
            rician_factor: config.ris.rician_factor,
            los_exponent: config.ris.los_exponent,
            nlos_exponent: config.ris.nlos_exponent,
        });
        base_stations.push(BaseStation {
            bs_id: b,
            band: band_idx,
            position: bs.position,
            num_subchannels: bs.num_subchannels,
            ris,
        });
    }

    let mut users = Vec::with_capacity(positions.len());
    for (u, &(position, draw_key)) in positions.iter().enumerate() {
        let candidate_bs: Vec<BsId> = base_stations
            .iter()
            .filter(|bs| {
                let radius = config.bands[bs.band].coverage_radius_m;
                (position[0] - bs.position[0]).hypot(position[1] - bs.position[1]) <= radius
            })
            .map(|bs| bs.bs_id)
            .collect();
        if candidate_bs.is_empty() && !config.allow_uncovered {
            return Err(Error::Uncovered { user: u, x: position[0], y: position[1] });
        }
        users.push(User { user_id: u, position, candidate_bs, draw_key });
    }

    let mut fading = FadingTable {
        shadow_db: Vec::with_capacity(base_stations.len()),
        direct_smallscale: Vec::with_capacity(base_stations.len()),
        ris_nlos: Vec::with_capacity(base_stations.len()),
        los_phase: Vec::with_capacity(base_stations.len()),
    };
    for bs in &base_stations {
        let b = bs.bs_id as u64;
        let sigma = config.bands[bs.band].shadow_sigma_db;
        let shadow = Normal::new(0.0, sigma).expect("validated sigma");
        fading.shadow_db.push(
            users
                .iter()
                .map(|user| shadow.sample(&mut rng::stream(seed, Domain::Shadow, &[b, user.draw_key])))
                .collect(),
        );
        fading.direct_smallscale.push(
            users
                .iter()
                .map(|user| complex_gaussian(&mut rng::stream(seed, Domain::DirectFading, &[b, user.draw_key])).norm_sqr())
                .collect(),
        );
        match &bs.ris {
            Some(panel) => {
                fading.ris_nlos.push(Some(
                    users
                        .iter()
                        .map(|user| {
                            (0..panel.num_elements())
                                .map(|k| {
                                    let (lx, lz) = panel.element_coords(k);
                                    nlos_draw(seed, config.nlos_law, &[b, lx as u64, lz as u64, user.draw_key])
                                })
                                .collect()
                        })
                        .collect(),
                ));
                let tau = 2.0 * std::f64::consts::PI;
                fading.los_phase.push(Some(
                    users
                        .iter()
                        .map(|user| match config.ris.los_phase {
                            LosPhaseMode::PerLink => {
                                vec![tau * rng::uniform(seed, Domain::LosPhase, &[b, user.draw_key]); panel.num_elements()]
                            }
                            LosPhaseMode::PerElement => (0..panel.num_elements())
                                .map(|k| {
                                    let (lx, lz) = panel.element_coords(k);
                                    tau * rng::uniform(seed, Domain::LosPhase, &[b, lx as u64, lz as u64, user.draw_key])
                                })
                                .collect(),
                        })
                        .collect(),
                ));
            }
            None => {
                fading.ris_nlos.push(None);
                fading.los_phase.push(None);
            }
        }
    }

    let mut scenario = Scenario {
        name: config.name.clone(),
        bands: config.bands.clone(),
        base_stations,
        users,
        fading,
        seed,
        mmwave_outage_beta: config.mmwave_outage_beta,
        mui_factor: config.mui_factor,
        half_power_beamwidth_deg: config.half_power_beamwidth_deg,
        diagnostics: Diagnostics::default(),
        links: LinkBudget::default(),
    };
    scenario.rebuild_links();
    Ok(scenario)
}
