use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{presets, ScenarioConfig};

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Users per cell: `3 + g` in 4G cells, `1 + g` elsewhere.
    UserGroup,
    /// Sub-channels per cell: `3 + g` in 4G cells, `1 + g` elsewhere.
    SubchannelGroup,
    /// RIS panel side `N`.
    RisN,
    /// Phase quantization bits `e`.
    RisE,
    OutageBeta,
    BeamwidthTheta3db,
    /// 0 or 1; 1 swaps one mmWave cell for a THz cell.
    ThzEnabled,
}

impl Axis {
    pub const ALL: [Axis; 7] = [
        Axis::UserGroup,
        Axis::SubchannelGroup,
        Axis::RisN,
        Axis::RisE,
        Axis::OutageBeta,
        Axis::BeamwidthTheta3db,
        Axis::ThzEnabled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::UserGroup => "user_group",
            Axis::SubchannelGroup => "subchannel_group",
            Axis::RisN => "ris_n",
            Axis::RisE => "ris_e",
            Axis::OutageBeta => "outage_beta",
            Axis::BeamwidthTheta3db => "beamwidth_theta3db",
            Axis::ThzEnabled => "thz_enabled",
        }
    }

    /// Layout a sweep along this axis starts from when no config is given.
    pub fn default_base(self) -> ScenarioConfig {
        match self {
            Axis::UserGroup | Axis::ThzEnabled => presets::default_config(),
            Axis::SubchannelGroup => presets::subchannel_group_config(1),
            _ => presets::trend_config(),
        }
    }

    fn positive_int(self, value: f64, max: f64) -> Result<usize> {
        if value.fract() != 0.0 || !(1.0..=max).contains(&value) {
            return Err(Error::Config(format!("{}: value {value} must be an integer in 1..={max}", self.name())));
        }
        Ok(value as usize)
    }

    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let mut c = base.clone();
        let is_4g = |band: &str| band == presets::BAND_4G;
        match self {
            Axis::UserGroup => {
                let (macro_users, other) = presets::group_counts(self.positive_int(value, 1000.0)?);
                for bs in &mut c.base_stations {
                    bs.users = if is_4g(&bs.band) { macro_users } else { other };
                }
            }
            Axis::SubchannelGroup => {
                let (macro_sub, other) = presets::group_counts(self.positive_int(value, 1000.0)?);
                for bs in &mut c.base_stations {
                    bs.num_subchannels = if is_4g(&bs.band) { macro_sub } else { other };
                }
            }
            Axis::RisN => c.ris.size = self.positive_int(value, 64.0)?,
            Axis::RisE => c.ris.quant_bits = self.positive_int(value, 8.0)? as u32,
            Axis::OutageBeta => {
                if !(value >= 0.0 && value.is_finite()) {
                    return Err(Error::Config(format!("outage_beta: value {value} must be non-negative")));
                }
                c.mmwave_outage_beta = value;
            }
            Axis::BeamwidthTheta3db => {
                if !(value > 0.0 && value < 360.0) {
                    return Err(Error::Config(format!("beamwidth_theta3db: value {value} must lie in (0, 360)")));
                }
                c.half_power_beamwidth_deg = value;
            }
            Axis::ThzEnabled => {
                if value == 1.0 {
                    presets::enable_thz(&mut c);
                } else if value != 0.0 {
                    return Err(Error::Config(format!("thz_enabled: value {value} must be 0 or 1")));
                }
            }
        }
        c.name = format!("{}-{}={}", base.name, self.name(), value);
        Ok(c)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let alias = match key.as_str() {
            "gu" => Some(Axis::UserGroup),
            "gc" => Some(Axis::SubchannelGroup),
            "n" => Some(Axis::RisN),
            "e" => Some(Axis::RisE),
            "beta" => Some(Axis::OutageBeta),
            "theta" | "theta3db" => Some(Axis::BeamwidthTheta3db),
            "thz" => Some(Axis::ThzEnabled),
            _ => None,
        };
        alias
            .or_else(|| Axis::ALL.into_iter().find(|a| a.name() == key))
            .ok_or_else(|| Error::Config(format!("unknown sweep axis {s:?}")))
    }
}
