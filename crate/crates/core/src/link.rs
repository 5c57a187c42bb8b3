//! Line-of-sight channel gain and Shannon capacity.
//!
//! `|H_LoS| = H_spr · H_abs · H_dust`, with spreading `c/(4πDf)`, molecular
//! absorption `exp(−kD/2)`, and dust amplitude `√T` from the Monte Carlo
//! transmittance. Capacity is `Δf·log2(1 + |H|²·P_t/(Δf·S_D))`.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::constants::{BOLTZMANN, SPEED_OF_LIGHT};
use crate::rng::{derive_seed, Stream};
use crate::scatter::{ensemble_extinction, DensitySpec, MediumSpec};
use crate::transport::{estimate_transmittance, TransportConfig};
use crate::{Error, Planet, Result};

/// Thermal noise density at 290 K, W/Hz.
pub const THERMAL_NOISE_PSD: f64 = BOLTZMANN * 290.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    /// `[f_lo, f_hi]`, Hz.
    pub band: (f64, f64),
    /// Frequency at which absorption and dust loss are evaluated, Hz.
    pub center: f64,
    /// Transmit power, W.
    pub tx_power: f64,
    /// Noise power spectral density, W/Hz.
    pub noise_psd: f64,
    /// Tx-Rx distance, m.
    pub distance: f64,
    pub planet: Planet,
}

impl LinkConfig {
    /// Preset band, band-center evaluation, 10 dBm, thermal noise, 1 m.
    pub fn for_planet(planet: Planet) -> Self {
        let p = planet.preset();
        LinkConfig {
            band: p.band,
            center: p.band_center(),
            tx_power: dbm_to_watts(10.0),
            noise_psd: THERMAL_NOISE_PSD,
            distance: 1.0,
            planet,
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.band.1 - self.band.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.band.0 < self.band.1 && self.band.0 > 0.0) {
            return Err(Error::domain("band must satisfy 0 < f_lo < f_hi"));
        }
        if !(self.center > 0.0) {
            return Err(Error::domain("center frequency must be positive"));
        }
        if !(self.tx_power > 0.0) || !(self.noise_psd > 0.0) || !(self.distance > 0.0) {
            return Err(Error::domain("transmit power, noise density and distance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    pub h_spr: f64,
    pub h_abs: f64,
    pub h_dust: f64,
    /// |H_LoS|.
    pub magnitude: f64,
    /// τ_LoS = D/c, s.
    pub delay: f64,
}

impl ChannelGains {
    /// Phase of `H_LoS` at `f`, radians in (−π, π].
    pub fn phase(&self, f: f64) -> f64 {
        let x = -2.0 * PI * f * self.delay;
        x.sin().atan2(x.cos())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    /// bit/s.
    pub capacity_bps: f64,
    /// |H|²·P_t/(Δf·S_D).
    pub snr: f64,
    pub gains: ChannelGains,
}

pub fn h_spreading(f: f64, distance: f64) -> f64 {
    SPEED_OF_LIGHT / (4.0 * PI * distance * f)
}

pub fn h_absorption(k: f64, distance: f64) -> f64 {
    (-k * distance / 2.0).exp()
}

/// `1/√(10^(−log10(e)·ln T))`, which is `√T`; zero for T = 0.
pub fn h_dust(transmittance: f64) -> f64 {
    if transmittance <= 0.0 {
        0.0
    } else {
        transmittance.sqrt()
    }
}

pub fn channel_gain(f: f64, distance: f64, k: f64, transmittance: f64) -> ChannelGains {
    let h_spr = h_spreading(f, distance);
    let h_abs = h_absorption(k, distance);
    let h_dust = h_dust(transmittance);
    ChannelGains {
        h_spr,
        h_abs,
        h_dust,
        magnitude: h_spr * h_abs * h_dust,
        delay: distance / SPEED_OF_LIGHT,
    }
}

/// `Δf·log2(1 + snr)`.
pub fn shannon_capacity(bandwidth: f64, snr: f64) -> f64 {
    bandwidth * snr.ln_1p() / LN_2
}

pub fn capacity(cfg: &LinkConfig, gains: ChannelGains) -> CapacityResult {
    let bw = cfg.bandwidth();
    let snr = gains.magnitude * gains.magnitude * cfg.tx_power / (bw * cfg.noise_psd);
    CapacityResult { capacity_bps: shannon_capacity(bw, snr), snr, gains }
}

/// Dust transmittance for `per_meter` particles per meter over `cfg.distance`.
fn dust_transmittance(
    cfg: &LinkConfig,
    medium: &MediumSpec,
    per_meter: f64,
    transport: &TransportConfig,
) -> Result<(f64, f64)> {
    let medium = medium.with_density(DensitySpec::linear(per_meter));
    let c_ext = ensemble_extinction(&medium, cfg.center)?.c_ext;
    let tc = TransportConfig { distance: cfg.distance, c_ext, ..*transport };
    let r = estimate_transmittance(&tc)?;
    Ok((r.transmittance, r.attenuation_db_per_m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub t_s: f64,
    /// Particles on the beam over the whole link.
    pub count: f64,
    pub transmittance: f64,
    pub attenuation_db_per_m: f64,
    pub result: CapacityResult,
}

/// Capacity for each per-second dust count.
///
/// Every second reuses the seed of `transport`, so seconds differ only
/// through their dust load.
pub fn run_time_scenario(
    cfg: &LinkConfig,
    medium: &MediumSpec,
    counts: &[f64],
    k_abs: f64,
    transport: &TransportConfig,
) -> Result<Vec<TimePoint>> {
    cfg.validate()?;
    if counts.iter().any(|c| !(*c >= 0.0)) {
        return Err(Error::domain("dust counts must be non-negative"));
    }
    counts
        .par_iter()
        .enumerate()
        .map(|(i, &count)| {
            let (t, a) = dust_transmittance(cfg, medium, count / cfg.distance, transport)?;
            let gains = channel_gain(cfg.center, cfg.distance, k_abs, t);
            Ok(TimePoint {
                t_s: i as f64,
                count,
                transmittance: t,
                attenuation_db_per_m: a,
                result: capacity(cfg, gains),
            })
        })
        .collect()
}

/// Drop windows `[start, end]` in seconds with their count ranges.
pub const DROP_WINDOWS: [(f64, f64); 2] = [(7.0, 9.0), (15.0, 17.0)];

pub fn in_drop_window(t: f64) -> bool {
    DROP_WINDOWS.iter().any(|&(a, b)| t >= a && t <= b)
}

/// Per-second dust counts for `seconds + 1` samples starting at t = 0.
///
/// Outside the drop windows counts are uniform in 100–200 on Earth and
/// 10 000–20 000 on Mars. Inside `[7, 9]` they fall to 20–29 (Mars 200–299)
/// and inside `[15, 17]` to 5–15 (Mars 50–150).
pub fn default_time_counts(planet: Planet, seconds: usize, seed: u64) -> Vec<f64> {
    let (storm, first, second) = match planet {
        Planet::Earth => ((100, 200), (20, 29), (5, 15)),
        Planet::Mars => ((10_000, 20_000), (200, 299), (50, 150)),
    };
    let mut rng = Stream::new(derive_seed(seed, 0x7153), 0);
    (0..=seconds)
        .map(|t| {
            let t = t as f64;
            let (lo, hi) = if t >= DROP_WINDOWS[0].0 && t <= DROP_WINDOWS[0].1 {
                first
            } else if t >= DROP_WINDOWS[1].0 && t <= DROP_WINDOWS[1].1 {
                second
            } else {
                storm
            };
            rng.integer_in(lo, hi) as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistancePoint {
    pub distance: f64,
    pub density_per_m: f64,
    pub k_abs: f64,
    pub transmittance: f64,
    pub result: CapacityResult,
}

/// Capacity against distance with a dust density drawn per distance from
/// `[density.0, density.1]` particles per meter.
///
/// The density draw for the i-th distance uses the same uniform variate for
/// any range, and transport shares one seed across distances, so sweeps with
/// different ranges are directly comparable point by point.
pub fn run_distance_sweep(
    cfg: &LinkConfig,
    medium: &MediumSpec,
    distances: &[f64],
    density: (f64, f64),
    k_abs: f64,
    transport: &TransportConfig,
) -> Result<Vec<DistancePoint>> {
    cfg.validate()?;
    if distances.is_empty() || distances.windows(2).any(|w| !(w[1] > w[0])) || !(distances[0] > 0.0) {
        return Err(Error::domain("distances must be positive and strictly increasing"));
    }
    if !(density.0 >= 0.0 && density.0 <= density.1) {
        return Err(Error::domain("density range must satisfy 0 <= lo <= hi"));
    }
    let label = derive_seed(transport.seed, 0xD157);
    distances
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            let u = Stream::new(label, i as u64).uniform();
            let per_meter = density.0 + u * (density.1 - density.0);
            let at = LinkConfig { distance: d, ..*cfg };
            let (t, _) = dust_transmittance(&at, medium, per_meter, transport)?;
            let gains = channel_gain(cfg.center, d, k_abs, t);
            Ok(DistancePoint {
                distance: d,
                density_per_m: per_meter,
                k_abs,
                transmittance: t,
                result: capacity(&at, gains),
            })
        })
        .collect()
}

pub fn time_csv(points: &[TimePoint]) -> String {
    let mut out = String::from("t_s,count,T_MS,A_dB_per_m,capacity_bps\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.t_s, p.count, p.transmittance, p.attenuation_db_per_m, p.result.capacity_bps
        );
    }
    out
}

pub fn distance_csv(points: &[DistancePoint]) -> String {
    let mut out = String::from("d_m,density_per_m,k_per_m,T_MS,H_spr,H_abs,H_dust,capacity_bps\n");
    for p in points {
        let g = p.result.gains;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.distance, p.density_per_m, p.k_abs, p.transmittance, g.h_spr, g.h_abs, g.h_dust, p.result.capacity_bps
        );
    }
    out
}
