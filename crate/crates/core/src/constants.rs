//! Physical constants (SI unless stated otherwise).

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Speed of light in cm/s, used for cm⁻¹ ↔ Hz conversion.
pub const SPEED_OF_LIGHT_CM: f64 = SPEED_OF_LIGHT * 100.0;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Avogadro constant, 1/mol.
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Second radiation constant h·c/k_B, cm·K.
pub const SECOND_RADIATION_CM_K: f64 = 1.438_776_877;

/// Catalog reference temperature, K.
pub const REFERENCE_TEMPERATURE: f64 = 296.0;

/// One standard atmosphere, Pa.
pub const ATMOSPHERE_PA: f64 = 101_325.0;

/// Converts a pressure in millibar to atmospheres.
pub fn millibar_to_atm(mb: f64) -> f64 {
    mb * 100.0 / ATMOSPHERE_PA
}
