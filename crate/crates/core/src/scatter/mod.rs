//! Dust extinction: size distributions, permittivity models, single-particle
//! cross sections and ensemble extinction coefficients.

mod cross_section;
mod distribution;
mod ensemble;
mod permittivity;

pub use cross_section::{
    mie_cext, mie_coefficients, rayleigh_cext, rayleigh_terms, wavelength, wavenumber,
    MieCoefficients, MieNormalization, RayleighTerms,
};
pub use distribution::{size_pdf, SizeDistribution, SizeDistributionKind};
pub use ensemble::{
    ensemble_extinction, linear_density_to_volumetric, number_density_from_visibility,
    Approximation, DensitySpec, ExtinctionResult, MediumSpec, DEFAULT_BEAM_AREA, VISIBILITY_CONSTANT,
};
pub use permittivity::{
    dust_permittivity, DustPermittivity, PermittivityModel, EARTH_LOSS_COEFFICIENT_GHZ,
    MARS_REFRACTIVE_INDEX,
};
