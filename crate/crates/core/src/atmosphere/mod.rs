//! Line-by-line molecular absorption.
//!
//! Catalog lines are read from 160-column fixed-width `.par` records, scaled
//! to the gas temperature, and broadened with a Lorentz (pressure) or
//! Gaussian (Doppler) profile. The absorption coefficient is the sum over
//! gases and lines of number density × intensity × line shape.

mod catalog;
mod gas;
mod lineshape;
mod spectrum;

pub use catalog::{
    bundled_catalog_dir, catalog_path, format_par_record, load_catalog, parse_par, parse_par_record,
    SpectralLine, RECORD_LENGTH,
};
pub use gas::{molar_mass, Gas};
pub use lineshape::{
    doppler_halfwidth, doppler_shape, line_intensity_at_t, lorentz_halfwidth, lorentz_shape,
    DOPPLER_CUTOFF_HALFWIDTHS, LORENTZ_CUTOFF_HZ,
};
pub use spectrum::{absorption_coefficient, write_spectrum_csv, AbsorptionSpectrum, GasMixture, LineShape};
