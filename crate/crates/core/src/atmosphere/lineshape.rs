use std::f64::consts::{LN_2, PI};

use super::catalog::SpectralLine;
use crate::constants::{
    AVOGADRO, BOLTZMANN, REFERENCE_TEMPERATURE, SECOND_RADIATION_CM_K, SPEED_OF_LIGHT, SPEED_OF_LIGHT_CM,
};

/// Lorentz lines are ignored farther than this from their center, Hz.
pub const LORENTZ_CUTOFF_HZ: f64 = 750e9;

/// Doppler lines are ignored farther than this many half-widths away.
pub const DOPPLER_CUTOFF_HALFWIDTHS: f64 = 50.0;

/// Line intensity scaled from 296 K to `t`.
///
/// The partition-function ratio uses the rotational power law (296/T)^m.
pub fn line_intensity_at_t(line: &SpectralLine, t: f64) -> f64 {
    let t_ref = REFERENCE_TEMPERATURE;
    if t == t_ref {
        return line.intensity;
    }
    let m = line.gas().map_or(1.5, |g| g.partition_exponent());
    let c2 = SECOND_RADIATION_CM_K;
    let partition = (t_ref / t).powf(m);
    let boltzmann = (-c2 * line.lower_energy / t).exp() / (-c2 * line.lower_energy / t_ref).exp();
    let stimulated = (-(-c2 * line.wavenumber / t).exp_m1()) / (-(-c2 * line.wavenumber / t_ref).exp_m1());
    line.intensity * partition * boltzmann * stimulated
}

/// Pressure-broadened HWHM in Hz. Pressures in atm.
pub fn lorentz_halfwidth(line: &SpectralLine, p: f64, p_partial: f64, t: f64) -> f64 {
    let scale = (REFERENCE_TEMPERATURE / t).powf(line.n_air);
    scale * (line.gamma_air * (p - p_partial) + line.gamma_self * p_partial) * SPEED_OF_LIGHT_CM
}

/// Lorentz profile (1/Hz) centred on the pressure-shifted line position.
pub fn lorentz_shape(f: f64, line: &SpectralLine, gamma: f64, p: f64) -> f64 {
    let center = line.frequency() + line.delta_air * p * SPEED_OF_LIGHT_CM;
    let d = f - center;
    gamma / (PI * (gamma * gamma + d * d))
}

/// Doppler HWHM in Hz.
pub fn doppler_halfwidth(line: &SpectralLine, t: f64) -> f64 {
    line.frequency() / SPEED_OF_LIGHT * (2.0 * AVOGADRO * BOLTZMANN * t * LN_2 / line.molar_mass).sqrt()
}

/// Gaussian profile (1/Hz) with HWHM `alpha`.
pub fn doppler_shape(f: f64, line: &SpectralLine, alpha: f64) -> f64 {
    let d = f - line.frequency();
    (LN_2 / (PI * alpha * alpha)).sqrt() * (-d * d * LN_2 / (alpha * alpha)).exp()
}
