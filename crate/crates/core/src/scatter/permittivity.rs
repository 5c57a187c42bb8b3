use num_complex::Complex64;

use crate::{Error, Result};

/// Loss coefficient of dry Earth dust: ε = 3 + i·18.256/f with f in **GHz**.
pub const EARTH_LOSS_COEFFICIENT_GHZ: f64 = 18.256;

/// Complex refractive index of Martian dust.
pub const MARS_REFRACTIVE_INDEX: Complex64 = Complex64::new(1.52, 0.01);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PermittivityModel {
    /// Frequency-dependent dry dust, refractive index √(3 + i·18.256/f_GHz).
    EarthDry,
    /// Constant refractive index 1.52 + 0.01i.
    MarsConstant,
    /// Fixed relative permittivity.
    User(Complex64),
}

/// Relative permittivity of a dust grain plus the optional surface-charge
/// parameters used by the Rayleigh charge term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DustPermittivity {
    pub model: PermittivityModel,
    pub relative: Complex64,
    /// Surface charge density σ_q, C/m².
    pub charge_density: f64,
    /// Field scale E0, V/m.
    pub field_scale: f64,
}

impl DustPermittivity {
    pub fn real(&self) -> f64 {
        self.relative.re
    }

    pub fn imag(&self) -> f64 {
        self.relative.im
    }

    pub fn with_charge(mut self, charge_density: f64, field_scale: f64) -> Self {
        self.charge_density = charge_density;
        self.field_scale = field_scale;
        self
    }
}

/// Evaluates the permittivity model at frequency `f` (Hz). The charge term is
/// inactive (σ_q = 0, E0 = 1 V/m) until set with
/// [`DustPermittivity::with_charge`].
pub fn dust_permittivity(model: PermittivityModel, f: f64) -> Result<DustPermittivity> {
    if !(f > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {f}")));
    }
    let relative = match model {
        PermittivityModel::EarthDry => Complex64::new(3.0, EARTH_LOSS_COEFFICIENT_GHZ / (f / 1e9)),
        PermittivityModel::MarsConstant => MARS_REFRACTIVE_INDEX * MARS_REFRACTIVE_INDEX,
        PermittivityModel::User(eps) => {
            if eps.im < 0.0 {
                return Err(Error::domain("imaginary permittivity must be non-negative"));
            }
            eps
        }
    };
    Ok(DustPermittivity {
        model,
        relative,
        charge_density: 0.0,
        field_scale: 1.0,
    })
}
