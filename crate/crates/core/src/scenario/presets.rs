//! Built-in band profiles and reference layouts.
//!
//! The layouts place the 4G macro cell at the origin with the small cells
//! around it. Coordinates are this crate's own choice; only the band
//! constants and the per-cell user/sub-channel counts are fixed.

use super::config::{BsConfig, RisConfig, ScenarioConfig};
use super::BandProfile;

pub const BAND_4G: &str = "4g";
pub const BAND_5G_LOW: &str = "5g1";
pub const BAND_5G_MID: &str = "5g2";
pub const BAND_THZ: &str = "thz";

/// Band ids of the four directional mmWave carriers.
pub const MMWAVE_BANDS: [&str; 4] = ["mmw26", "mmw27", "mmw28", "mmw29"];

#[allow(clippy::too_many_arguments)]
fn cellular(
    id: &str,
    frequency_hz: f64,
    subchannel_bandwidth_hz: f64,
    tx_power_dbm: f64,
    path_loss_exponent: f64,
    ue_gain_dbi: f64,
    bs_gain_dbi: f64,
    coverage_radius_m: f64,
    shadow_sigma_db: f64,
) -> BandProfile {
    BandProfile {
        band_id: id.into(),
        frequency_hz,
        subchannel_bandwidth_hz,
        tx_power_dbm,
        noise_density_dbm_per_hz: -174.0,
        path_loss_exponent,
        ue_gain_dbi,
        bs_gain_dbi,
        coverage_radius_m,
        shadow_sigma_db,
        is_mmwave: false,
        channel_constant: 1.0,
    }
}

fn directional(id: &str, frequency_hz: f64) -> BandProfile {
    BandProfile {
        band_id: id.into(),
        frequency_hz,
        subchannel_bandwidth_hz: 14.4e6,
        tx_power_dbm: 21.0,
        noise_density_dbm_per_hz: -174.0,
        path_loss_exponent: 2.1,
        ue_gain_dbi: 0.0,
        bs_gain_dbi: 0.0,
        coverage_radius_m: 150.0,
        shadow_sigma_db: 4.0,
        is_mmwave: true,
        channel_constant: 1.0,
    }
}

/// 0.34 THz cell: 10 GHz bandwidth, 26 dBm, n = 2, 10 dB shadowing.
/// Coverage radius and antenna model follow the mmWave cells.
pub fn thz_band() -> BandProfile {
    BandProfile {
        band_id: BAND_THZ.into(),
        subchannel_bandwidth_hz: 10e9,
        tx_power_dbm: 26.0,
        path_loss_exponent: 2.0,
        shadow_sigma_db: 10.0,
        ..directional(BAND_THZ, 0.34e12)
    }
}

/// Radio constants of every band the reference layouts use.
pub fn standard_bands() -> Vec<BandProfile> {
    let mut bands = vec![
        cellular(BAND_4G, 1.9e9, 1.8e6, 23.0, 3.8, 0.5, 13.0, 1500.0, 8.0),
        cellular(BAND_5G_LOW, 2.5e9, 3.6e6, 26.0, 3.8, 3.0, 25.0, 350.0, 6.0),
        cellular(BAND_5G_MID, 4.8e9, 7.2e6, 26.0, 3.0, 3.0, 25.0, 300.0, 5.0),
    ];
    for (id, ghz) in MMWAVE_BANDS.iter().zip([26.0, 27.0, 28.0, 29.0]) {
        bands.push(directional(id, ghz * 1e9));
    }
    bands.push(thz_band());
    bands
}

/// Per-cell user and sub-channel counts of the ten-cell layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellCounts {
    pub users_4g: usize,
    pub users_other: usize,
    pub subchannels_4g: usize,
    pub subchannels_other: usize,
}

/// Users (or sub-channels) of `(4G, other)` cells for group index `g`
/// (1-based) of the user/sub-channel group table.
pub fn group_counts(g: usize) -> (usize, usize) {
    (3 + g, 1 + g)
}

const TEN_CELL_SITES: [(&str, [f64; 2]); 10] = [
    (BAND_4G, [0.0, 0.0]),
    ("mmw26", [-700.0, 700.0]),
    ("mmw27", [700.0, 700.0]),
    ("mmw28", [700.0, -700.0]),
    ("mmw29", [-700.0, -700.0]),
    (BAND_5G_LOW, [-450.0, 450.0]),
    (BAND_5G_LOW, [900.0, 0.0]),
    (BAND_5G_LOW, [0.0, -900.0]),
    (BAND_5G_MID, [450.0, -450.0]),
    (BAND_5G_MID, [-900.0, 0.0]),
];

fn base(name: &str, base_stations: Vec<BsConfig>) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        bands: standard_bands(),
        base_stations,
        users: Vec::new(),
        ris: RisConfig::default(),
        mmwave_outage_beta: 0.001,
        mui_factor: 1.0,
        half_power_beamwidth_deg: 30.0,
        nlos_law: Default::default(),
        allow_uncovered: false,
    }
}

/// Ten cells: one 4G macro, four mmWave cells, three 5G(1) and two 5G(2).
pub fn ten_cell_config(name: &str, counts: CellCounts) -> ScenarioConfig {
    let cells = TEN_CELL_SITES
        .iter()
        .map(|&(band, position)| {
            let macro_cell = band == BAND_4G;
            BsConfig {
                band: band.into(),
                position,
                num_subchannels: if macro_cell { counts.subchannels_4g } else { counts.subchannels_other },
                users: if macro_cell { counts.users_4g } else { counts.users_other },
            }
        })
        .collect();
    base(name, cells)
}

/// Ten cells and 55 users (10 in the macro disk, 5 in each small cell).
pub fn default_config() -> ScenarioConfig {
    ten_cell_config(
        "default",
        CellCounts { users_4g: 10, users_other: 5, subchannels_4g: 6, subchannels_other: 4 },
    )
}

/// User-group sweep layout: sub-channels 6 (4G) / 4 (others).
pub fn user_group_config(group: usize) -> ScenarioConfig {
    let (users_4g, users_other) = group_counts(group);
    ten_cell_config(
        &format!("gu{group}"),
        CellCounts { users_4g, users_other, subchannels_4g: 6, subchannels_other: 4 },
    )
}

/// Sub-channel-group sweep layout: users 7 (4G) / 5 (others).
pub fn subchannel_group_config(group: usize) -> ScenarioConfig {
    let (subchannels_4g, subchannels_other) = group_counts(group);
    ten_cell_config(
        &format!("gc{group}"),
        CellCounts { users_4g: 7, users_other: 5, subchannels_4g, subchannels_other },
    )
}

/// Layout of the RIS / outage / beamwidth sweeps: users 7/5, sub-channels 5/3.
pub fn trend_config() -> ScenarioConfig {
    ten_cell_config(
        "trend",
        CellCounts { users_4g: 7, users_other: 5, subchannels_4g: 5, subchannels_other: 3 },
    )
}

/// Swaps the first directional cell for the 0.34 THz profile.
pub fn enable_thz(config: &mut ScenarioConfig) {
    if config.band(BAND_THZ).is_none() {
        config.bands.push(thz_band());
    }
    let directional: Vec<usize> = config
        .base_stations
        .iter()
        .enumerate()
        .filter(|(_, bs)| config.is_directional(bs) && bs.band != BAND_THZ)
        .map(|(i, _)| i)
        .collect();
    if config.base_stations.iter().any(|bs| bs.band == BAND_THZ) {
        return;
    }
    if let Some(&first) = directional.first() {
        config.base_stations[first].band = BAND_THZ.into();
    }
}

/// Four cells (4G, mmWave, 5G(1), 5G(2)) with `users_per_bs` users each;
/// small enough for exhaustive traversal.
pub fn small_config(users_per_bs: usize) -> ScenarioConfig {
    let cells = [
        (BAND_4G, [0.0, 0.0], 6),
        ("mmw28", [-400.0, 400.0], 6),
        (BAND_5G_LOW, [500.0, 0.0], 6),
        (BAND_5G_MID, [0.0, -500.0], 6),
    ]
    .into_iter()
    .map(|(band, position, num_subchannels)| BsConfig {
        band: band.into(),
        position,
        num_subchannels,
        users: users_per_bs,
    })
    .collect();
    base(&format!("small{users_per_bs}"), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_layout_has_ten_cells_and_55_users() {
        let cfg = default_config();
        assert_eq!(cfg.base_stations.len(), 10);
        let users: usize = cfg.base_stations.iter().map(|b| b.users).sum();
        assert_eq!(users, 55);
        cfg.validate().unwrap();
    }

    #[test]
    fn first_user_group_column() {
        assert_eq!(group_counts(1), (4, 2));
        assert_eq!(group_counts(7), (10, 8));
        let cfg = user_group_config(1);
        assert_eq!(cfg.base_stations[0].users, 4);
        assert!(cfg.base_stations[1..].iter().all(|b| b.users == 2));
    }

    #[test]
    fn thz_replaces_one_directional_cell() {
        let mut cfg = trend_config();
        enable_thz(&mut cfg);
        assert_eq!(cfg.base_stations.iter().filter(|b| b.band == BAND_THZ).count(), 1);
        cfg.validate().unwrap();
        let before = cfg.clone();
        enable_thz(&mut cfg);
        assert_eq!(cfg, before);
    }

    #[test]
    fn table_two_constants() {
        let bands = standard_bands();
        let find = |id: &str| bands.iter().find(|b| b.band_id == id).unwrap();
        let lte = find(BAND_4G);
        assert_eq!((lte.frequency_hz, lte.subchannel_bandwidth_hz, lte.tx_power_dbm), (1.9e9, 1.8e6, 23.0));
        assert_eq!((lte.ue_gain_dbi, lte.bs_gain_dbi, lte.coverage_radius_m), (0.5, 13.0, 1500.0));
        let mid = find(BAND_5G_MID);
        assert_eq!((mid.path_loss_exponent, mid.shadow_sigma_db, mid.coverage_radius_m), (3.0, 5.0, 300.0));
        let mmw = find("mmw28");
        assert!(mmw.is_mmwave);
        assert_eq!((mmw.subchannel_bandwidth_hz, mmw.tx_power_dbm, mmw.path_loss_exponent), (14.4e6, 21.0, 2.1));
    }
}
