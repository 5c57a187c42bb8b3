use std::f64::consts::PI;

use super::{
    dust_permittivity, mie_cext, rayleigh_cext, wavelength, wavenumber, DustPermittivity,
    MieNormalization, PermittivityModel, SizeDistribution,
};
use crate::{Error, Result};

/// Empirical constant linking visibility (m) to extinction.
pub const VISIBILITY_CONSTANT: f64 = 0.034744;

/// Beam face area used to turn per-meter counts into volumetric density, m².
pub const DEFAULT_BEAM_AREA: f64 = 1e-6;

/// Number of radius nodes reported in [`ExtinctionResult::samples`].
const SAMPLE_NODES: usize = 33;

/// How the particle number density is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensitySpec {
    /// Meteorological visibility, m.
    Visibility(f64),
    /// Particles per m³.
    Volumetric(f64),
    /// Particles per meter of beam, spread over `beam_area` (m²).
    LinearCount { per_meter: f64, beam_area: f64 },
}

impl DensitySpec {
    pub fn linear(per_meter: f64) -> Self {
        DensitySpec::LinearCount { per_meter, beam_area: DEFAULT_BEAM_AREA }
    }
}

/// Single-particle cross-section model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Approximation {
    Mie(MieNormalization),
    Rayleigh,
}

impl Approximation {
    /// Mie for the frequency-dependent Earth model, Rayleigh otherwise.
    pub fn for_model(model: PermittivityModel) -> Self {
        match model {
            PermittivityModel::EarthDry => Approximation::Mie(MieNormalization::default()),
            _ => Approximation::Rayleigh,
        }
    }
}

/// A dust population: sizes, material, and how many there are.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    pub distribution: SizeDistribution,
    pub permittivity: PermittivityModel,
    /// Surface charge density σ_q, C/m².
    pub charge_density: f64,
    /// Field scale E0, V/m.
    pub field_scale: f64,
    pub approximation: Approximation,
    pub density: DensitySpec,
}

impl MediumSpec {
    pub fn new(distribution: SizeDistribution, permittivity: PermittivityModel, density: DensitySpec) -> Self {
        MediumSpec {
            distribution,
            permittivity,
            charge_density: 0.0,
            field_scale: 1.0,
            approximation: Approximation::for_model(permittivity),
            density,
        }
    }

    pub fn earth(density: DensitySpec) -> Self {
        Self::new(SizeDistribution::earth_default(), PermittivityModel::EarthDry, density)
    }

    pub fn mars(density: DensitySpec) -> Self {
        Self::new(SizeDistribution::mars_default(), PermittivityModel::MarsConstant, density)
    }

    pub fn with_density(mut self, density: DensitySpec) -> Self {
        self.density = density;
        self
    }

    /// Volumetric number density N0, 1/m³.
    pub fn number_density(&self) -> Result<f64> {
        match self.density {
            DensitySpec::Visibility(v) => number_density_from_visibility(&self.distribution, v),
            DensitySpec::Volumetric(n) => {
                if !(n >= 0.0) || !n.is_finite() {
                    return Err(Error::domain(format!("number density must be >= 0, got {n}")));
                }
                Ok(n)
            }
            DensitySpec::LinearCount { per_meter, beam_area } => {
                linear_density_to_volumetric(per_meter, beam_area)
            }
        }
    }

    pub fn permittivity_at(&self, f: f64) -> Result<DustPermittivity> {
        Ok(dust_permittivity(self.permittivity, f)?.with_charge(self.charge_density, self.field_scale))
    }

    /// Cross section of one grain of radius `r` at frequency `f`, m².
    pub fn cross_section(&self, f: f64, r: f64, eps: &DustPermittivity) -> Result<f64> {
        match self.approximation {
            Approximation::Mie(norm) => mie_cext(f, r, eps, norm),
            Approximation::Rayleigh => rayleigh_cext(f, r, eps),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtinctionResult {
    /// Ensemble extinction coefficient, 1/m.
    pub c_ext: f64,
    /// (radius m, single-particle cross section) pairs across the support.
    pub samples: Vec<(f64, f64)>,
    pub wavenumber: f64,
    pub wavelength: f64,
}

/// N0 = 15 / (0.034744 · V_b · E[πr²]), V_b in meters.
pub fn number_density_from_visibility(dist: &SizeDistribution, visibility: f64) -> Result<f64> {
    if !(visibility > 0.0) || !visibility.is_finite() {
        return Err(Error::domain(format!("visibility must be positive, got {visibility}")));
    }
    let mean_area = dist.expect(|r| PI * r * r);
    Ok(15.0 / (VISIBILITY_CONSTANT * visibility * mean_area))
}

pub fn linear_density_to_volumetric(count_per_meter: f64, beam_area: f64) -> Result<f64> {
    if !(beam_area > 0.0) {
        return Err(Error::domain(format!("beam area must be positive, got {beam_area}")));
    }
    if !(count_per_meter >= 0.0) || !count_per_meter.is_finite() {
        return Err(Error::domain(format!("count per meter must be >= 0, got {count_per_meter}")));
    }
    Ok(count_per_meter / beam_area)
}

/// C_ext = N0 · ∫ P(r) c_ext(r) dr.
pub fn ensemble_extinction(medium: &MediumSpec, f: f64) -> Result<ExtinctionResult> {
    if !(f > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {f}")));
    }
    let n0 = medium.number_density()?;
    let eps = medium.permittivity_at(f)?;
    let dist = &medium.distribution;
    // Surface any domain error before integrating.
    medium.cross_section(f, dist.r_min(), &eps)?;

    let (lo, hi) = (dist.r_min().ln(), dist.r_max().ln());
    let samples = (0..SAMPLE_NODES)
        .map(|i| {
            let r = (lo + (hi - lo) * i as f64 / (SAMPLE_NODES - 1) as f64).exp();
            medium.cross_section(f, r, &eps).map(|c| (r, c))
        })
        .collect::<Result<Vec<_>>>()?;

    let mean = dist.expect(|r| medium.cross_section(f, r, &eps).unwrap_or(0.0));
    let c_ext = if n0 == 0.0 { 0.0 } else { n0 * mean };
    Ok(ExtinctionResult {
        c_ext,
        samples,
        wavenumber: wavenumber(f),
        wavelength: wavelength(f),
    })
}
