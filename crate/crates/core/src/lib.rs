//! Terahertz link attenuation and capacity through dusty planetary
//! atmospheres.
//!
//! The crate composes four models:
//!
//! - [`scatter`]: single-particle Mie/Rayleigh extinction and ensemble
//!   extinction over a truncated log-normal dust population.
//! - [`transport`]: Monte Carlo photon-packet transport through a homogeneous
//!   dust slab, giving transmittance and specific attenuation.
//! - [`atmosphere`]: line-by-line molecular absorption from fixed-width
//!   spectroscopic catalogs with Lorentz or Doppler line shapes.
//! - [`storm`]: a kinematic 3D dust field and cone-beam particle counting.
//!
//! [`link`] combines spreading, absorption and dust gains into Shannon
//! capacity, and [`experiment`] wires everything into reproducible sweeps
//! that write CSV and SVG files.

// `!(x > 0.0)` is used deliberately so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atmosphere;
pub mod constants;
mod error;
pub mod experiment;
pub mod link;
pub mod preset;
pub mod quadrature;
pub mod rng;
pub mod scatter;
pub mod storm;
pub mod transport;

pub use error::{Error, Result};
pub use preset::{Planet, PlanetPreset};
