use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::catalog::SpectralLine;
use super::gas::Gas;
use super::lineshape::{
    doppler_halfwidth, doppler_shape, line_intensity_at_t, lorentz_halfwidth, lorentz_shape,
    DOPPLER_CUTOFF_HALFWIDTHS, LORENTZ_CUTOFF_HZ,
};
use crate::constants::{millibar_to_atm, ATMOSPHERE_PA, BOLTZMANN, SPEED_OF_LIGHT, SPEED_OF_LIGHT_CM};
use crate::{Error, Planet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineShape {
    Lorentz,
    Doppler,
}

/// Gas composition at a fixed temperature and pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct GasMixture {
    species: Vec<(Gas, f64)>,
    temperature: f64,
    pressure_atm: f64,
    shape: LineShape,
}

impl GasMixture {
    pub fn new(species: Vec<(Gas, f64)>, temperature: f64, pressure_atm: f64, shape: LineShape) -> Result<Self> {
        if !(temperature > 0.0) || !(pressure_atm > 0.0) {
            return Err(Error::domain("mixture temperature and pressure must be positive"));
        }
        if species.iter().any(|&(_, x)| !(x >= 0.0)) {
            return Err(Error::domain("mixing ratios must be non-negative"));
        }
        let total: f64 = species.iter().map(|&(_, x)| x).sum();
        if total > 1.001 {
            return Err(Error::domain(format!("mixing ratios sum to {total}, above 1.001")));
        }
        for (i, (g, _)) in species.iter().enumerate() {
            if species[..i].iter().any(|(h, _)| h == g) {
                return Err(Error::domain(format!("gas {g} listed twice")));
            }
        }
        Ok(GasMixture { species, temperature, pressure_atm, shape })
    }

    /// Sea-level air at 288 K, 1013 mb, 1 % water vapour; pressure broadened.
    pub fn earth() -> Self {
        Self::earth_with(288.0, 1013.0, 0.01)
    }

    pub fn earth_with(temperature: f64, pressure_mb: f64, h2o: f64) -> Self {
        let species = vec![
            (Gas::N2, 0.78084),
            (Gas::O2, 0.20946),
            (Gas::H2O, h2o),
            (Gas::CO2, 3e-5),
            (Gas::CH4, 1.5e-6),
            (Gas::SO2, 1e-6),
            (Gas::O3, 5e-8),
            (Gas::N2O, 2e-8),
            (Gas::CO, 1e-8),
            (Gas::NH3, 1e-8),
        ];
        Self::new(species, temperature, millibar_to_atm(pressure_mb), LineShape::Lorentz).expect("valid preset")
    }

    /// Martian surface air at 210 K, 6.1 mb, 250 ppm water; Doppler broadened.
    pub fn mars() -> Self {
        Self::mars_with(210.0, 6.1, 250e-6)
    }

    pub fn mars_with(temperature: f64, pressure_mb: f64, h2o: f64) -> Self {
        let species = vec![
            (Gas::CO2, 0.9532),
            (Gas::N2, 0.027),
            (Gas::O2, 0.0013),
            (Gas::H2O, h2o),
            (Gas::O3, 1e-7),
            (Gas::CO, 8e-4),
            (Gas::NO, 1e-4),
        ];
        Self::new(species, temperature, millibar_to_atm(pressure_mb), LineShape::Doppler).expect("valid preset")
    }

    pub fn for_planet(planet: Planet) -> Self {
        match planet {
            Planet::Earth => Self::earth(),
            Planet::Mars => Self::mars(),
        }
    }

    pub fn species(&self) -> &[(Gas, f64)] {
        &self.species
    }

    pub fn gases(&self) -> Vec<Gas> {
        self.species.iter().map(|&(g, _)| g).collect()
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn pressure_atm(&self) -> f64 {
        self.pressure_atm
    }

    pub fn shape(&self) -> LineShape {
        self.shape
    }

    pub fn with_shape(mut self, shape: LineShape) -> Self {
        self.shape = shape;
        self
    }

    /// Replaces the mixing ratio of `gas` (adding it if absent).
    pub fn with_mixing_ratio(mut self, gas: Gas, ratio: f64) -> Result<Self> {
        match self.species.iter_mut().find(|(g, _)| *g == gas) {
            Some(entry) => entry.1 = ratio,
            None => self.species.push((gas, ratio)),
        }
        Self::new(self.species, self.temperature, self.pressure_atm, self.shape)
    }

    pub fn mixing_ratio(&self, gas: Gas) -> f64 {
        self.species.iter().find(|(g, _)| *g == gas).map_or(0.0, |&(_, x)| x)
    }

    /// Ideal-gas number density of `gas`, molecules/m³.
    pub fn number_density(&self, gas: Gas) -> f64 {
        self.mixing_ratio(gas) * self.pressure_atm * ATMOSPHERE_PA / (BOLTZMANN * self.temperature)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionSpectrum {
    /// Hz, strictly increasing.
    pub frequencies: Vec<f64>,
    /// Absorption coefficient, 1/m.
    pub k: Vec<f64>,
    pub mixture: GasMixture,
    pub shape: LineShape,
}

/// Per-line constants that do not depend on the evaluation frequency.
struct PreparedLine {
    line: SpectralLine,
    /// n · S(T) · c with S converted to m per molecule.
    strength: f64,
    width: f64,
    reach: f64,
    center: f64,
}

fn prepare(mixture: &GasMixture, catalog: &[SpectralLine]) -> Vec<PreparedLine> {
    let t = mixture.temperature;
    let p = mixture.pressure_atm;
    catalog
        .iter()
        .filter_map(|line| {
            let gas = line.gas()?;
            let n = mixture.number_density(gas);
            if n == 0.0 {
                return None;
            }
            let strength = n * line_intensity_at_t(line, t) * 1e-2 * SPEED_OF_LIGHT;
            let (width, reach, center) = match mixture.shape {
                LineShape::Lorentz => {
                    let pp = mixture.mixing_ratio(gas) * p;
                    let center = line.frequency() + line.delta_air * p * SPEED_OF_LIGHT_CM;
                    (lorentz_halfwidth(line, p, pp, t), LORENTZ_CUTOFF_HZ, center)
                }
                LineShape::Doppler => {
                    let a = doppler_halfwidth(line, t);
                    (a, DOPPLER_CUTOFF_HALFWIDTHS * a, line.frequency())
                }
            };
            Some(PreparedLine { line: *line, strength, width, reach, center })
        })
        .collect()
}

/// k(f) on `grid` from every catalog line of every gas in `mixture`.
///
/// Lines of gases absent from the mixture are ignored, as are lines farther
/// from a grid point than the shape's cutoff.
pub fn absorption_coefficient(
    mixture: &GasMixture,
    catalog: &[SpectralLine],
    grid: &[f64],
) -> Result<AbsorptionSpectrum> {
    if grid.is_empty() {
        return Err(Error::domain("frequency grid is empty"));
    }
    if grid.iter().any(|&f| !(f > 0.0) || !f.is_finite()) {
        return Err(Error::domain("frequency grid values must be positive and finite"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("frequency grid must be strictly increasing"));
    }
    let lines = prepare(mixture, catalog);
    let p = mixture.pressure_atm;
    let k = grid
        .par_iter()
        .map(|&f| {
            lines
                .iter()
                .filter(|l| (f - l.center).abs() <= l.reach)
                .map(|l| {
                    let shape = match mixture.shape {
                        LineShape::Lorentz => lorentz_shape(f, &l.line, l.width, p),
                        LineShape::Doppler => doppler_shape(f, &l.line, l.width),
                    };
                    l.strength * shape
                })
                .sum::<f64>()
        })
        .collect();
    Ok(AbsorptionSpectrum {
        frequencies: grid.to_vec(),
        k,
        mixture: mixture.clone(),
        shape: mixture.shape,
    })
}

/// Writes `f_hz,k_per_m` rows.
pub fn write_spectrum_csv(spectrum: &AbsorptionSpectrum, path: &Path) -> Result<()> {
    let mut out = String::from("f_hz,k_per_m\n");
    for (f, k) in spectrum.frequencies.iter().zip(&spectrum.k) {
        let _ = writeln!(out, "{f},{k}");
    }
    std::fs::write(path, out).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
