use std::f64::consts::PI;

use num_complex::Complex64;

use super::DustPermittivity;
use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::{Error, Result};

/// Wavenumber 2πf/c, rad/m.
pub fn wavenumber(f: f64) -> f64 {
    2.0 * PI * f / SPEED_OF_LIGHT
}

/// Free-space wavelength c/f, m.
pub fn wavelength(f: f64) -> f64 {
    SPEED_OF_LIGHT / f
}

/// How the small-particle Mie series is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MieNormalization {
    /// Prefactor k³·r·λ²/2, exactly as the expansion is usually printed.
    /// The result is not an area; it is kept for comparison runs.
    AsPrinted,
    /// Prefactor λ²·(kr)³/(2π), which makes the result an area in m² and
    /// reduces to the Rayleigh absorption term at leading order.
    #[default]
    CrossSection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Series coefficients of the small-particle Mie expansion.
pub fn mie_coefficients(eps: Complex64) -> MieCoefficients {
    let (re, im) = (eps.re, eps.im);
    let d = (re + 2.0).powi(2) + im * im;
    let c1 = 6.0 * im / d;
    let c2 = im * (6.0 / 5.0) * (7.0 * re * re + 7.0 * im * im + 4.0 * re - 20.0) / (d * d)
        + 1.0 / 15.0
        + 5.0 / (3.0 * ((2.0 * re + 3.0).powi(2) + 4.0 * im * im).powi(2));
    let c3 = (4.0 / 3.0)
        * ((re - 1.0).powi(2) * (re + 2.0) + (2.0 * (re - 1.0) * (re + 2.0) - 9.0) + im.powi(4))
        / (d * d);
    MieCoefficients { c1, c2, c3 }
}

fn check_inputs(f: f64, r: f64) -> Result<()> {
    if !(f > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {f}")));
    }
    if !(r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// Small-particle Mie extinction of one grain of radius `r` at frequency `f`.
pub fn mie_cext(f: f64, r: f64, eps: &DustPermittivity, norm: MieNormalization) -> Result<f64> {
    check_inputs(f, r)?;
    let k = wavenumber(f);
    let lambda = wavelength(f);
    let x = k * r;
    let MieCoefficients { c1, c2, c3 } = mie_coefficients(eps.relative);
    let series = c1 + c2 * x * x + c3 * x * x * x;
    let prefactor = match norm {
        MieNormalization::AsPrinted => k.powi(3) * r * lambda * lambda / 2.0,
        MieNormalization::CrossSection => lambda * lambda * x.powi(3) / (2.0 * PI),
    };
    Ok(prefactor * series)
}

/// The three Rayleigh contributions, m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighTerms {
    pub scattering: f64,
    pub absorption: f64,
    pub charge: f64,
}

impl RayleighTerms {
    pub fn total(&self) -> f64 {
        self.scattering + self.absorption + self.charge
    }
}

/// Rayleigh scattering, absorption and surface-charge terms for one grain.
pub fn rayleigh_terms(f: f64, r: f64, eps: &DustPermittivity) -> Result<RayleighTerms> {
    check_inputs(f, r)?;
    let e = eps.relative;
    let plus2 = e + 2.0;
    if plus2.norm_sqr() == 0.0 {
        return Err(Error::domain("permittivity of -2 makes the Rayleigh terms singular"));
    }
    let k = wavenumber(f);
    let k4r6 = k.powi(4) * r.powi(6);
    let scattering = 8.0 / 3.0 * PI * k4r6 * ((e - 1.0) / plus2).norm_sqr();
    let absorption = 12.0 * PI * k * e.im * r.powi(3) / plus2.norm_sqr();
    let charge = if eps.charge_density == 0.0 {
        0.0
    } else {
        if eps.field_scale == 0.0 {
            return Err(Error::domain("charge term needs a non-zero field scale E0"));
        }
        let ratio = eps.charge_density / (eps.field_scale * VACUUM_PERMITTIVITY);
        PI / 6.0 * k4r6 * ratio * ratio * (e - 1.0).norm_sqr()
    };
    Ok(RayleighTerms { scattering, absorption, charge })
}

/// Rayleigh extinction cross section of one grain, m².
pub fn rayleigh_cext(f: f64, r: f64, eps: &DustPermittivity) -> Result<f64> {
    Ok(rayleigh_terms(f, r, eps)?.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::{dust_permittivity, PermittivityModel};

    fn earth(f: f64) -> DustPermittivity {
        dust_permittivity(PermittivityModel::EarthDry, f).unwrap()
    }

    fn mars() -> DustPermittivity {
        dust_permittivity(PermittivityModel::MarsConstant, 1.64e12).unwrap()
    }

    #[test]
    fn c1_hand_value() {
        let c = mie_coefficients(Complex64::new(3.0, 0.076067));
        let hand = 6.0 * 0.076067 / (25.0 + 0.076067f64.powi(2));
        assert!((c.c1 - hand).abs() < 1e-15);
        assert!((c.c1 - 1.8252e-2).abs() < 1e-6);
    }

    #[test]
    fn lossless_grain_has_no_c1() {
        assert_eq!(mie_coefficients(Complex64::new(3.0, 0.0)).c1, 0.0);
    }

    #[test]
    fn second_term_ratio_scales_with_kr_squared() {
        let eps = earth(240e9);
        let c = mie_coefficients(eps.relative);
        let k = wavenumber(240e9);
        let ratio = |r: f64| c.c2 * (k * r).powi(2) / c.c1;
        assert!((ratio(20e-6) / ratio(10e-6) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn normalizations_differ_by_r_squared_over_pi() {
        let eps = earth(240e9);
        let r = 30e-6;
        let raw = mie_cext(240e9, r, &eps, MieNormalization::AsPrinted).unwrap();
        let area = mie_cext(240e9, r, &eps, MieNormalization::CrossSection).unwrap();
        assert!((area / raw - r * r / PI).abs() / (r * r / PI) < 1e-12);
    }

    #[test]
    fn cross_section_leading_order_matches_rayleigh_absorption() {
        // Both describe the same dipole absorption as kr → 0.
        let eps = earth(240e9);
        let r = 1e-8;
        let mie = mie_cext(240e9, r, &eps, MieNormalization::CrossSection).unwrap();
        let ray = rayleigh_terms(240e9, r, &eps).unwrap().absorption;
        assert!((mie / ray - 1.0).abs() < 1e-6, "{mie} vs {ray}");
    }

    #[test]
    fn mars_clausius_mossotti_factor() {
        let e = mars().relative;
        // (1.3103 + 0.0304i) / (4.3103 + 0.0304i), squared modulus by hand.
        let num = 1.3103f64.powi(2) + 0.0304f64.powi(2);
        let den = 4.3103f64.powi(2) + 0.0304f64.powi(2);
        let factor = ((e - 1.0) / (e + 2.0)).norm_sqr();
        assert!((factor - num / den).abs() < 1e-12);
        assert!((factor - 9.246e-2).abs() < 1e-5);
    }

    #[test]
    fn zero_charge_means_two_terms() {
        let t = rayleigh_terms(1.64e12, 2e-6, &mars()).unwrap();
        assert_eq!(t.charge, 0.0);
        let total = rayleigh_cext(1.64e12, 2e-6, &mars()).unwrap();
        assert!((total - (t.scattering + t.absorption)).abs() <= 1e-12 * total);
    }

    #[test]
    fn scattering_term_scales_as_r6() {
        let a = rayleigh_terms(1.64e12, 1e-6, &mars()).unwrap().scattering;
        let b = rayleigh_terms(1.64e12, 2e-6, &mars()).unwrap().scattering;
        assert!((b / a - 64.0).abs() < 1e-12);
    }

    #[test]
    fn charge_needs_field_scale() {
        let eps = mars().with_charge(1e-6, 0.0);
        assert!(matches!(rayleigh_terms(1.64e12, 1e-6, &eps), Err(Error::Domain(_))));
        let eps = mars().with_charge(1e-6, 1e3);
        assert!(rayleigh_terms(1.64e12, 1e-6, &eps).unwrap().charge > 0.0);
    }

    #[test]
    fn c1_non_negative_for_lossy_grains() {
        for im in [0.0, 1e-6, 0.01, 0.5, 3.0, 50.0] {
            for re in [1.0, 2.3, 3.0, 10.0] {
                assert!(mie_coefficients(Complex64::new(re, im)).c1 >= 0.0);
            }
        }
    }

    #[test]
    fn rejects_non_positive_inputs() {
        let eps = mars();
        assert!(rayleigh_cext(0.0, 1e-6, &eps).is_err());
        assert!(mie_cext(1e12, -1e-6, &eps, MieNormalization::CrossSection).is_err());
    }
}
