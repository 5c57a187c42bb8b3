use std::f64::consts::{PI, SQRT_2};

use crate::quadrature::integrate_default;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeDistributionKind {
    /// Log-normal in radius with median `median_radius` (m) and geometric
    /// standard deviation `geometric_sigma` (> 1).
    LogNormal {
        median_radius: f64,
        geometric_sigma: f64,
    },
    /// Every particle has the same radius (m).
    PointMass { radius: f64 },
}

/// A particle radius distribution truncated to `[r_min, r_max]` and
/// renormalized to unit mass on that interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeDistribution {
    kind: SizeDistributionKind,
    r_min: f64,
    r_max: f64,
    /// Untruncated log-normal mass inside the bounds.
    mass: f64,
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

impl SizeDistribution {
    pub fn log_normal(median_radius: f64, geometric_sigma: f64, r_min: f64, r_max: f64) -> Result<Self> {
        check_bounds(r_min, r_max)?;
        if !(median_radius > 0.0) {
            return Err(Error::domain("median radius must be positive"));
        }
        if !(geometric_sigma > 1.0) {
            return Err(Error::domain("geometric sigma must exceed 1"));
        }
        let s = geometric_sigma.ln();
        let mu = median_radius.ln();
        let mass = normal_cdf((r_max.ln() - mu) / s) - normal_cdf((r_min.ln() - mu) / s);
        if !(mass > 0.0) {
            return Err(Error::domain("log-normal has no mass inside the radius bounds"));
        }
        Ok(SizeDistribution {
            kind: SizeDistributionKind::LogNormal { median_radius, geometric_sigma },
            r_min,
            r_max,
            mass,
        })
    }

    pub fn point_mass(radius: f64, r_min: f64, r_max: f64) -> Result<Self> {
        check_bounds(r_min, r_max)?;
        if !(radius >= r_min && radius <= r_max) {
            return Err(Error::domain("point-mass radius outside bounds"));
        }
        Ok(SizeDistribution {
            kind: SizeDistributionKind::PointMass { radius },
            r_min,
            r_max,
            mass: 1.0,
        })
    }

    /// Point mass at `radius` with bounds `[radius/2, 2·radius]`.
    pub fn point_mass_at(radius: f64) -> Result<Self> {
        Self::point_mass(radius, 0.5 * radius, 2.0 * radius)
    }

    /// Earth dust: r_m = 10 µm, σ_g = 2, truncated to 1–150 µm.
    pub fn earth_default() -> Self {
        Self::log_normal(10e-6, 2.0, 1e-6, 150e-6).expect("valid preset")
    }

    /// Mars dust: r_m = 1.5 µm, σ_g = 1.5, truncated to 0.5–4 µm.
    pub fn mars_default() -> Self {
        Self::log_normal(1.5e-6, 1.5, 0.5e-6, 4e-6).expect("valid preset")
    }

    pub fn kind(&self) -> SizeDistributionKind {
        self.kind
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Probability density at `r` (1/m). Zero off the atom for a point mass,
    /// infinite on it.
    pub fn pdf(&self, r: f64) -> Result<f64> {
        if !(r >= self.r_min && r <= self.r_max) {
            return Err(Error::domain(format!(
                "radius {r:e} m outside [{:e}, {:e}]",
                self.r_min, self.r_max
            )));
        }
        Ok(match self.kind {
            SizeDistributionKind::LogNormal { median_radius, geometric_sigma } => {
                let s = geometric_sigma.ln();
                let z = (r / median_radius).ln() / s;
                (-0.5 * z * z).exp() / (r * s * (2.0 * PI).sqrt() * self.mass)
            }
            SizeDistributionKind::PointMass { radius } => {
                if r == radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        })
    }

    /// Probability mass in `[a, b]`, clipped to the support.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.r_min);
        let b = b.min(self.r_max);
        if a > b {
            return 0.0;
        }
        match self.kind {
            SizeDistributionKind::LogNormal { median_radius, geometric_sigma } => {
                let s = geometric_sigma.ln();
                let mu = median_radius.ln();
                (normal_cdf((b.ln() - mu) / s) - normal_cdf((a.ln() - mu) / s)) / self.mass
            }
            SizeDistributionKind::PointMass { radius } => {
                if radius >= a && radius <= b {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Expectation of `f(r)` over the truncated distribution.
    ///
    /// The log-normal case integrates in `ln r`, where the density is a
    /// Gaussian and the adaptive rule converges quickly.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        match self.kind {
            SizeDistributionKind::LogNormal { median_radius, geometric_sigma } => {
                let s = geometric_sigma.ln();
                let mu = median_radius.ln();
                let norm = 1.0 / (s * (2.0 * PI).sqrt() * self.mass);
                integrate_default(
                    |u: f64| {
                        let z = (u - mu) / s;
                        norm * (-0.5 * z * z).exp() * f(u.exp())
                    },
                    self.r_min.ln(),
                    self.r_max.ln(),
                )
            }
            SizeDistributionKind::PointMass { radius } => f(radius),
        }
    }

    /// Location of the density maximum in `r` (before truncation).
    pub fn mode(&self) -> f64 {
        match self.kind {
            SizeDistributionKind::LogNormal { median_radius, geometric_sigma } => {
                let s = geometric_sigma.ln();
                median_radius * (-s * s).exp()
            }
            SizeDistributionKind::PointMass { radius } => radius,
        }
    }
}

fn check_bounds(r_min: f64, r_max: f64) -> Result<()> {
    if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
        return Err(Error::domain(format!(
            "radius bounds must satisfy 0 < r_min < r_max (got {r_min:e}, {r_max:e})"
        )));
    }
    Ok(())
}

/// Density of `dist` at radius `r` (1/m).
pub fn size_pdf(dist: &SizeDistribution, r: f64) -> Result<f64> {
    dist.pdf(r)
}
