//! Direct recomputation of user rates from the raw scenario data.
//!
//! Deliberately naive: no cached link budget, no shared helpers from the
//! library besides the data types. Every term is rebuilt from positions,
//! band constants and the frozen fading draws.

use std::f64::consts::PI;

use hcn_ris::{Assignment, PhaseConfig, Scenario};
use num_complex::Complex64;

const C: f64 = 299_792_458.0;

fn from_db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Loss in dB: 32.45 + 20 lg f[MHz] + 20 lg d0[km] + 10 n lg(d/d0) + X, d0 = 1 m.
fn loss_db(f_hz: f64, n: f64, d: f64, shadow: f64) -> f64 {
    let d = if d < 1.0 { 1.0 } else { d };
    32.45 + 20.0 * (f_hz / 1e6).log10() + 20.0 * (1.0f64 / 1000.0).log10() + 10.0 * n * d.log10() + shadow
}

fn gain_db(theta_deg: f64, theta3: f64) -> f64 {
    let g0 = 10.0 * ((1.6162 / (theta3.to_radians() / 2.0).sin()).powi(2)).log10();
    let gsl = -0.4111 * theta3.ln() - 10.579;
    if theta_deg <= 1.3 * theta3 {
        g0 - 3.01 * (2.0 * theta_deg / theta3).powi(2)
    } else {
        gsl
    }
}

/// Angle at `o` between `a` and `b`, in degrees within [0, 180].
fn angle(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    if a == o || b == o {
        return 0.0;
    }
    let t1 = (a[1] - o[1]).atan2(a[0] - o[0]);
    let t2 = (b[1] - o[1]).atan2(b[0] - o[0]);
    let mut d = (t1 - t2).abs();
    if d > PI {
        d = 2.0 * PI - d;
    }
    d.to_degrees()
}

fn reflected(s: &Scenario, b: usize, u: usize, phases: &PhaseConfig) -> Complex64 {
    let bs = &s.base_stations[b];
    let (Some(panel), Some(idx)) = (&bs.ris, &phases.panels[b]) else {
        return Complex64::new(0.0, 0.0);
    };
    let nlos = s.fading.ris_nlos[b].as_ref().unwrap();
    let theta = s.fading.los_phase[b].as_ref().unwrap();
    let radius = s.bands[bs.band].coverage_radius_m;
    let n = panel.size;
    let dx = panel.element_spacing_m;
    let k = panel.rician_factor;
    let period = ((1u32 << panel.quant_bits) - 1) as f64;
    let ue = [s.users[u].position[0], s.users[u].position[1], 0.0];
    let host = [bs.position[0], bs.position[1], 0.0];
    let mut total = Complex64::new(0.0, 0.0);
    for lx in 1..=n {
        for lz in 1..=n {
            let e = (lx - 1) * n + (lz - 1);
            let pos = [
                bs.position[0] - dx * (n as f64 / 2.0 + 1.0) + dx * lx as f64,
                bs.position[1] - radius,
                dx * lz as f64,
            ];
            let prod = dist3(ue, pos) * dist3(host, pos);
            let los = Complex64::new(0.0, -theta[u][e]).exp() * prod.powf(-panel.los_exponent / 2.0);
            let h = los * (k / (1.0 + k)).sqrt()
                + nlos[u][e] * prod.powf(-panel.nlos_exponent / 2.0) * (1.0 / (1.0 + k)).sqrt();
            let q = Complex64::new(0.0, 2.0 * PI * idx[e] as f64 / period).exp();
            total += h * q;
        }
    }
    total
}

/// Rate of every user in bit/s.
pub fn user_rates(s: &Scenario, a: &Assignment, phases: &PhaseConfig) -> Vec<f64> {
    let nu = s.users.len();
    let mut out = vec![0.0; nu];
    let theta3 = s.half_power_beamwidth_deg;
    #[allow(clippy::needless_range_loop)]
    for u in 0..nu {
        let Some(slot) = a.slots[u] else { continue };
        let b = slot.bs;
        let band = &s.bands[s.base_stations[b].band];
        let bpos = s.base_stations[b].position;
        let p_mw = from_db(band.tx_power_dbm);
        let noise = from_db(band.noise_density_dbm_per_hz) * band.subchannel_bandwidth_hz;
        let path_gain =
            |bb: usize, v: usize| from_db(-loss_db(band.frequency_hz, band.path_loss_exponent, dist2(s.base_stations[bb].position, s.users[v].position), s.fading.shadow_db[bb][v]));
        let sharing: Vec<usize> = (0..nu)
            .filter(|&v| v != u)
            .filter(|&v| match a.slots[v] {
                Some(o) => {
                    o.subchannel == slot.subchannel
                        && s.bands[s.base_stations[o.bs].band].frequency_hz == band.frequency_hz
                        && (!band.is_mmwave || o.bs == b)
                }
                None => false,
            })
            .collect();

        let sinr = if band.is_mmwave {
            let k0 = (C / band.frequency_hz / (4.0 * PI)).powi(2);
            let g0 = from_db(gain_db(0.0, theta3));
            let f = Complex64::new(path_gain(b, u).sqrt(), 0.0) + reflected(s, b, u, phases);
            let signal = f.norm_sqr() * k0 * g0 * g0 * p_mw;
            let mut interference = 0.0;
            for &v in &sharing {
                let vpos = s.users[v].position;
                let gr = from_db(gain_db(angle(bpos, s.users[u].position, vpos), theta3));
                let their = s.base_stations[a.slots[v].unwrap().bs].position;
                let gt = from_db(gain_db(angle(vpos, their, bpos), theta3));
                interference += s.mui_factor * k0 * gt * gr * path_gain(b, v) * p_mw;
                interference += reflected(s, b, v, phases).norm_sqr() * gt * gr * p_mw;
            }
            signal / (interference + noise)
        } else {
            let g = from_db(band.ue_gain_dbi) * from_db(band.bs_gain_dbi);
            let rx = |v: usize| band.channel_constant * s.fading.direct_smallscale[b][v] * g * path_gain(b, v) * p_mw;
            let interference: f64 = sharing.iter().map(|&v| rx(v)).sum();
            rx(u) / (interference + noise)
        };
        let mut rate = band.subchannel_bandwidth_hz * (1.0 + sinr).log2();
        if band.is_mmwave {
            rate *= (-s.mmwave_outage_beta * dist2(bpos, s.users[u].position)).exp();
        }
        out[u] = rate;
    }
    out
}
