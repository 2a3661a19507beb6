use serde::{Deserialize, Serialize};

use super::BandProfile;
use crate::error::{Error, Result};

/// Small-scale law of the RIS NLoS coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NlosLaw {
    /// Unit circularly-symmetric complex Gaussian.
    #[default]
    ComplexGaussian,
    /// Nakagami-m magnitude with uniform phase.
    Nakagami { m: f64, omega: f64 },
}

/// Granularity of the frozen LoS phase `theta'` of the reflect channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LosPhaseMode {
    /// One draw per (element, user) pair.
    #[default]
    PerElement,
    /// One draw per user link, shared by every element of the panel.
    PerLink,
}

/// RIS geometry and reflect-channel parameters shared by every directional cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RisConfig {
    /// Panel is `size × size` elements.
    pub size: usize,
    /// Phase quantization bits `e`.
    pub quant_bits: u32,
    pub element_spacing_m: f64,
    pub rician_factor: f64,
    pub los_exponent: f64,
    pub nlos_exponent: f64,
    pub los_phase: LosPhaseMode,
}

impl Default for RisConfig {
    fn default() -> Self {
        Self {
            size: 4,
            quant_bits: 3,
            element_spacing_m: 0.005,
            rician_factor: 4.0,
            los_exponent: 2.0,
            nlos_exponent: 2.2,
            los_phase: LosPhaseMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsConfig {
    /// `band_id` of one of the configured bands.
    pub band: String,
    pub position: [f64; 2],
    pub num_subchannels: usize,
    /// Users dropped uniformly inside this cell's coverage disk.
    #[serde(default)]
    pub users: usize,
}

/// Declarative description of a network layout. Parsed from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default = "super::presets::standard_bands")]
    pub bands: Vec<BandProfile>,
    pub base_stations: Vec<BsConfig>,
    /// Explicitly positioned users; they get the lowest user ids.
    #[serde(default)]
    pub users: Vec<[f64; 2]>,
    #[serde(default)]
    pub ris: RisConfig,
    /// Blockage density `beta` of directional links (1/m).
    #[serde(default = "default_outage_beta")]
    pub mmwave_outage_beta: f64,
    /// Interference factor `rho` between directional links.
    #[serde(default = "default_mui")]
    pub mui_factor: f64,
    #[serde(default = "default_beamwidth")]
    pub half_power_beamwidth_deg: f64,
    #[serde(default)]
    pub nlos_law: NlosLaw,
    /// Keep users outside every coverage disk instead of rejecting the layout.
    #[serde(default)]
    pub allow_uncovered: bool,
}

fn default_outage_beta() -> f64 {
    0.001
}

fn default_mui() -> f64 {
    1.0
}

fn default_beamwidth() -> f64 {
    30.0
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn band(&self, id: &str) -> Option<&BandProfile> {
        self.bands.iter().find(|b| b.band_id == id)
    }

    pub fn band_index(&self, id: &str) -> Option<usize> {
        self.bands.iter().position(|b| b.band_id == id)
    }

    pub fn is_directional(&self, bs: &BsConfig) -> bool {
        self.band(&bs.band).is_some_and(|b| b.is_mmwave)
    }

    /// Static checks that do not need any random draw.
    pub fn validate(&self) -> Result<()> {
        if self.base_stations.is_empty() {
            return Err(Error::Config("no base stations".into()));
        }
        for (i, band) in self.bands.iter().enumerate() {
            band.validate()?;
            if self.bands[..i].iter().any(|b| b.band_id == band.band_id) {
                return Err(Error::Config(format!("duplicate band id {:?}", band.band_id)));
            }
        }
        let mut directional_freqs: Vec<f64> = Vec::new();
        for (i, bs) in self.base_stations.iter().enumerate() {
            let band = self
                .band(&bs.band)
                .ok_or_else(|| Error::Config(format!("base station {i}: unknown band {:?}", bs.band)))?;
            if bs.num_subchannels == 0 {
                return Err(Error::Config(format!("base station {i}: needs at least one sub-channel")));
            }
            if !bs.position.iter().all(|c| c.is_finite()) {
                return Err(Error::Config(format!("base station {i}: non-finite position")));
            }
            if band.is_mmwave {
                if directional_freqs.contains(&band.frequency_hz) {
                    return Err(Error::Config(format!(
                        "base station {i}: directional cells must use pairwise-distinct frequencies ({} Hz reused)",
                        band.frequency_hz
                    )));
                }
                directional_freqs.push(band.frequency_hz);
            }
        }
        let ris = &self.ris;
        if ris.size == 0 {
            return Err(Error::Config("ris.size must be at least 1".into()));
        }
        if !(1..=8).contains(&ris.quant_bits) {
            return Err(Error::Config("ris.quant_bits must be within 1..=8".into()));
        }
        if !(ris.element_spacing_m > 0.0) {
            return Err(Error::Config("ris.element_spacing_m must be positive".into()));
        }
        if !(ris.rician_factor >= 0.0) || !(ris.los_exponent >= 0.0) || !(ris.nlos_exponent >= 0.0) {
            return Err(Error::Config("ris channel parameters must be non-negative".into()));
        }
        if !(self.mmwave_outage_beta >= 0.0) {
            return Err(Error::Config("mmwave_outage_beta must be non-negative".into()));
        }
        if !(self.mui_factor >= 0.0) {
            return Err(Error::Config("mui_factor must be non-negative".into()));
        }
        if !(self.half_power_beamwidth_deg > 0.0 && self.half_power_beamwidth_deg < 360.0) {
            return Err(Error::Config("half_power_beamwidth_deg must lie in (0, 360)".into()));
        }
        if let NlosLaw::Nakagami { m, omega } = self.nlos_law {
            if !(m >= 0.5) || !(omega > 0.0) {
                return Err(Error::Config("nakagami law needs m >= 0.5 and omega > 0".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json_uses_defaults() {
        let cfg = ScenarioConfig::from_json(
            r#"{"base_stations": [{"band": "4g", "position": [0, 0], "num_subchannels": 2}],
                "users": [[100, 0]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.ris, RisConfig::default());
        assert_eq!(cfg.mmwave_outage_beta, 0.001);
        assert_eq!(cfg.mui_factor, 1.0);
        assert_eq!(cfg.half_power_beamwidth_deg, 30.0);
        assert_eq!(cfg.nlos_law, NlosLaw::ComplexGaussian);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn rejects_unknown_band_and_reused_directional_frequency() {
        let mut cfg = super::super::presets::default_config();
        cfg.base_stations[0].band = "5g9".into();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = super::super::presets::default_config();
        cfg.base_stations[2].band = cfg.base_stations[1].band.clone();
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("pairwise-distinct"), "{err}");
    }

    #[test]
    fn rejects_zero_subchannels() {
        let mut cfg = super::super::presets::default_config();
        cfg.base_stations[3].num_subchannels = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn nakagami_law_round_trips() {
        let mut cfg = super::super::presets::default_config();
        cfg.nlos_law = NlosLaw::Nakagami { m: 3.0, omega: 1.0 / 3.0 };
        let back = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }
}
