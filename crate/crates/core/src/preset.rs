//! Built-in Earth and Mars channel settings.

use std::fmt;
use std::str::FromStr;

use crate::scatter::{DensitySpec, MediumSpec, PermittivityModel, SizeDistribution};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Planet {
    Earth,
    Mars,
}

impl Planet {
    pub fn name(self) -> &'static str {
        match self {
            Planet::Earth => "earth",
            Planet::Mars => "mars",
        }
    }

    pub fn preset(self) -> PlanetPreset {
        match self {
            Planet::Earth => PlanetPreset::earth(),
            Planet::Mars => PlanetPreset::mars(),
        }
    }
}

impl fmt::Display for Planet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Planet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "earth" => Ok(Planet::Earth),
            "mars" => Ok(Planet::Mars),
            other => Err(Error::InvalidConfig(format!("unknown planet `{other}` (expected earth or mars)"))),
        }
    }
}

/// Default channel conditions for one planet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanetPreset {
    pub planet: Planet,
    /// Carrier used by the attenuation sweeps, Hz.
    pub frequency: f64,
    /// Capacity band `[f_lo, f_hi]`, Hz.
    pub band: (f64, f64),
    pub packets: usize,
    /// Particles on the beam per `distance`.
    pub dust_count: f64,
    /// Tx-Rx distance for the attenuation sweeps, m.
    pub distance: f64,
    pub size_distribution: SizeDistribution,
    pub permittivity: PermittivityModel,
    pub antenna_height: f64,
    pub temperature: f64,
    pub pressure_mb: f64,
}

impl PlanetPreset {
    pub fn earth() -> Self {
        PlanetPreset {
            planet: Planet::Earth,
            frequency: 0.24e12,
            band: (0.22e12, 0.24e12),
            packets: 10_000,
            dust_count: 100.0,
            distance: 10.0,
            size_distribution: SizeDistribution::earth_default(),
            permittivity: PermittivityModel::EarthDry,
            antenna_height: 50.0,
            temperature: 288.0,
            pressure_mb: 1013.0,
        }
    }

    pub fn mars() -> Self {
        PlanetPreset {
            planet: Planet::Mars,
            frequency: 1.64e12,
            band: (1.64e12, 1.67e12),
            packets: 10_000,
            dust_count: 10_000.0,
            distance: 10.0,
            size_distribution: SizeDistribution::mars_default(),
            permittivity: PermittivityModel::MarsConstant,
            antenna_height: 50.0,
            temperature: 210.0,
            pressure_mb: 6.1,
        }
    }

    /// Particles per meter of beam.
    pub fn linear_density(&self) -> f64 {
        self.dust_count / self.distance
    }

    /// The preset dust population at its default density.
    pub fn medium(&self) -> MediumSpec {
        MediumSpec::new(
            self.size_distribution,
            self.permittivity,
            DensitySpec::linear(self.linear_density()),
        )
    }

    pub fn band_center(&self) -> f64 {
        0.5 * (self.band.0 + self.band.1)
    }

    pub fn bandwidth(&self) -> f64 {
        self.band.1 - self.band.0
    }
}
