//! Propagation math: log-distance path loss with shadowing, the Gaussian
//! main-lobe antenna pattern used by directional cells, RIS cascaded
//! Rician channels, quantized phase responses and blockage outage.
//!
//! Decibel helpers live here too; everything downstream of scenario
//! construction works in linear units (mW, W/W, Hz).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex channel coefficient (dimensionless amplitude).
pub type ComplexCoeff = Complex64;

/// Reference distance of the log-distance model, in metres.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Main-lobe width as a multiple of the half-power beamwidth.
pub const MAIN_LOBE_RATIO: f64 = 2.6;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// dBm to milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

/// Free-space loss `32.45 + 20 lg f + 20 lg d0` with `f` in MHz and `d0` in km.
pub fn free_space_loss_db(frequency_hz: f64, d0_m: f64) -> f64 {
    32.45 + 20.0 * (frequency_hz / 1e6).log10() + 20.0 * (d0_m / 1e3).log10()
}

/// Log-distance path loss `L(d0) + 10 n lg(d/d0) + X_sigma`.
///
/// Distances below the 1 m reference are clamped to it; use
/// [`is_clamped`] to detect that case.
pub fn path_loss_db(frequency_hz: f64, exponent: f64, distance_m: f64, shadow_db: f64) -> f64 {
    let d = distance_m.max(REFERENCE_DISTANCE_M);
    free_space_loss_db(frequency_hz, REFERENCE_DISTANCE_M)
        + 10.0 * exponent * (d / REFERENCE_DISTANCE_M).log10()
        + shadow_db
}

pub fn is_clamped(distance_m: f64) -> bool {
    distance_m < REFERENCE_DISTANCE_M
}

/// `k0 = (lambda / 4 pi)^2`.
pub fn wavelength_factor(frequency_hz: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / frequency_hz;
    (lambda / (4.0 * PI)).powi(2)
}

/// Blockage outage `1 - exp(-beta * l)`.
pub fn outage_probability(distance_m: f64, beta_per_m: f64) -> f64 {
    -(-beta_per_m * distance_m).exp_m1()
}

/// Gaussian main lobe with a constant side-lobe floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern {
    pub half_power_beamwidth_deg: f64,
}

impl AntennaPattern {
    pub fn new(half_power_beamwidth_deg: f64) -> Self {
        assert!(half_power_beamwidth_deg > 0.0, "beamwidth must be positive");
        Self { half_power_beamwidth_deg }
    }

    /// Peak gain `G0 = 10 lg (1.6162 / sin(theta_3dB / 2))^2`.
    pub fn max_gain_db(&self) -> f64 {
        let half = (self.half_power_beamwidth_deg / 2.0).to_radians();
        10.0 * (1.6162 / half.sin()).powi(2).log10()
    }

    /// Side-lobe level `-0.4111 ln(theta_3dB) - 10.579`.
    pub fn side_lobe_db(&self) -> f64 {
        -0.4111 * self.half_power_beamwidth_deg.ln() - 10.579
    }

    pub fn main_lobe_width_deg(&self) -> f64 {
        MAIN_LOBE_RATIO * self.half_power_beamwidth_deg
    }

    /// Gain in dB at `theta_deg` off boresight, `theta_deg` in `[0, 180]`.
    pub fn gain_db(&self, theta_deg: f64) -> f64 {
        if theta_deg <= self.main_lobe_width_deg() / 2.0 {
            let x = 2.0 * theta_deg / self.half_power_beamwidth_deg;
            self.max_gain_db() - 3.01 * x * x
        } else {
            self.side_lobe_db()
        }
    }

    pub fn gain_linear(&self, theta_deg: f64) -> f64 {
        db_to_linear(self.gain_db(theta_deg))
    }
}

/// Free function form of [`AntennaPattern::gain_db`].
pub fn mmwave_antenna_gain_db(theta_deg: f64, theta_3db_deg: f64) -> f64 {
    AntennaPattern::new(theta_3db_deg).gain_db(theta_deg)
}

/// Angle in degrees at `vertex` between the rays towards `a` and `b`.
/// Degenerate rays (a point on the vertex) count as boresight.
pub fn angle_at(vertex: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let u = [a[0] - vertex[0], a[1] - vertex[1]];
    let v = [b[0] - vertex[0], b[1] - vertex[1]];
    let nu = u[0].hypot(u[1]);
    let nv = v[0].hypot(v[1]);
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let cos = ((u[0] * v[0] + u[1] * v[1]) / (nu * nv)).clamp(-1.0, 1.0);
    cos.acos().to_degrees()
}

pub fn distance3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Parameters of the cascaded transmitter → element → receiver channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianParams {
    /// Rician K-factor.
    pub k_factor: f64,
    pub los_exponent: f64,
    pub nlos_exponent: f64,
}

impl RicianParams {
    pub fn los_weight(&self) -> f64 {
        (self.k_factor / (1.0 + self.k_factor)).sqrt()
    }

    pub fn nlos_weight(&self) -> f64 {
        (1.0 / (1.0 + self.k_factor)).sqrt()
    }
}

/// Reflected channel through one element located at `element`.
///
/// `nlos` is the frozen small-scale coefficient of this (element, link)
/// pair and `los_phase` the frozen LoS phase of the link.
pub fn ris_reflect_channel(
    params: &RicianParams,
    element: [f64; 3],
    endpoint_t: [f64; 3],
    endpoint_r: [f64; 3],
    nlos: Complex64,
    los_phase: f64,
) -> Complex64 {
    let d_t = distance3(endpoint_t, element);
    let d_r = distance3(endpoint_r, element);
    assert!(d_t > 0.0 && d_r > 0.0, "endpoint coincides with RIS element");
    let product = d_t * d_r;
    let los = Complex64::from_polar(product.powf(-params.los_exponent).sqrt(), -los_phase);
    let scattered = nlos * product.powf(-params.nlos_exponent).sqrt();
    los * params.los_weight() + scattered * params.nlos_weight()
}

/// Number of selectable indices for `bits` quantization bits.
pub fn phase_levels(bits: u32) -> usize {
    1usize << bits
}

/// Response `q = exp(j 2 pi m / (2^e - 1))`.
///
/// The index is reduced modulo `2^e - 1` before building the angle so that
/// `m = 0` and `m = 2^e - 1` produce bit-identical coefficients.
pub fn phase_response(index: u8, bits: u32) -> Complex64 {
    let levels = phase_levels(bits);
    assert!((index as usize) < levels, "phase index {index} out of range for {bits} bits");
    let period = (levels - 1) as u64;
    let reduced = index as u64 % period;
    if reduced == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let theta = 2.0 * PI * reduced as f64 / period as f64;
    Complex64::from_polar(1.0, theta)
}

/// `sum_k h_k q_k` over one panel.
pub fn ris_effective_sum(channels: &[Complex64], phases: &[u8], bits: u32) -> Complex64 {
    assert_eq!(channels.len(), phases.len(), "one phase index per element");
    channels
        .iter()
        .zip(phases)
        .fold(Complex64::new(0.0, 0.0), |acc, (h, &m)| acc + h * phase_response(m, bits))
}
