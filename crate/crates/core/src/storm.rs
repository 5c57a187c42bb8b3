//! Kinematic dust-storm field and cone-beam particle counting.
//!
//! Particles leave a short line source across `Y` at the base of the
//! vortex, are carried downstream by a wind whose speed grows exponentially with `X`, swirl
//! around a Rankine vortex that also lifts them, and settle under gravity
//! back to the ground, where they rest until lifted again. Particles leave
//! the field only through the sides or the top of the domain.
//! The beam is a cone split into thin disks; a particle is inside when its
//! distance from the beam axis is within the local disk radius.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::rng::{derive_seed, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StormConfig {
    /// X position of the line source, m.
    pub source_x: f64,
    /// Y extent of the line source, m.
    pub source_span: (f64, f64),
    /// Release height of new particles, m.
    pub source_height: f64,
    /// New particles per step.
    pub emission_rate: usize,
    pub vortex_center: [f64; 3],
    /// Solid-body core radius of the vortex, m.
    pub vortex_core: f64,
    /// Angular speed inside the core, rad/s.
    pub vortex_strength: f64,
    /// Growth rate `a` of the downstream wind `vx = a·(x + ramp_offset)`, 1/s.
    pub advection_scale: f64,
    /// Offset `x0` of the wind ramp, m.
    pub ramp_offset: f64,
    /// Upward speed inside the vortex core, m/s.
    pub updraft: f64,
    /// Downward settling speed everywhere, m/s.
    pub settling: f64,
    pub timestep: f64,
    pub bounds_min: [f64; 3],
    pub bounds_max: [f64; 3],
    pub radius_range: (f64, f64),
    pub seed: u64,
}

impl Default for StormConfig {
    fn default() -> Self {
        StormConfig {
            source_x: 6000.0,
            source_span: (-4.0, 4.0),
            source_height: 1.0,
            emission_rate: 100,
            vortex_center: [6000.0, 0.0, 0.0],
            vortex_core: 300.0,
            vortex_strength: 0.01,
            advection_scale: 1e-3,
            ramp_offset: 500.0,
            updraft: 3.0,
            settling: 0.05,
            timestep: 5.0,
            bounds_min: [0.0, -2000.0, 0.0],
            bounds_max: [8000.0, 2000.0, 200.0],
            radius_range: (0.5e-6, 4e-6),
            seed: 1,
        }
    }
}

impl StormConfig {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            self.vortex_core,
            self.vortex_strength,
            self.advection_scale,
            self.ramp_offset,
            self.updraft,
            self.settling,
        ];
        if rates.iter().any(|r| !(*r >= 0.0)) {
            return Err(Error::domain("storm rates must be non-negative"));
        }
        if !(self.timestep > 0.0) {
            return Err(Error::domain("storm timestep must be positive"));
        }
        if (0..3).any(|k| !(self.bounds_min[k] < self.bounds_max[k])) {
            return Err(Error::domain("storm domain bounds must be well ordered"));
        }
        if !(self.source_span.0 <= self.source_span.1) {
            return Err(Error::domain("line source span must be well ordered"));
        }
        let (r0, r1) = self.radius_range;
        if !(r0 > 0.0 && r0 <= r1) {
            return Err(Error::domain("particle radius range must satisfy 0 < min <= max"));
        }
        Ok(())
    }

    /// Wind velocity at `p`, m/s.
    pub fn velocity(&self, p: [f64; 3]) -> [f64; 3] {
        let mut v = [self.advection_scale * (p[0] + self.ramp_offset), 0.0, -self.settling];
        let dx = p[0] - self.vortex_center[0];
        let dy = p[1] - self.vortex_center[1];
        let r2 = dx * dx + dy * dy;
        let core2 = self.vortex_core * self.vortex_core;
        let omega = if r2 <= core2 {
            self.vortex_strength
        } else {
            self.vortex_strength * core2 / r2
        };
        v[0] -= omega * dy;
        v[1] += omega * dx;
        if r2 <= core2 {
            v[2] += self.updraft;
        }
        v
    }

    fn in_bounds(&self, p: [f64; 3]) -> bool {
        (0..3).all(|k| p[k] >= self.bounds_min[k] && p[k] <= self.bounds_max[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub position: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParticleField {
    pub particles: Vec<Particle>,
    pub time: f64,
    pub step: u64,
    pub emitted: u64,
    pub removed: u64,
}

impl ParticleField {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }
}

/// Advances every particle by one explicit Euler step, drops those that
/// leave the domain through its sides or top, then releases new particles
/// along the line source.
pub fn step_field(field: &ParticleField, cfg: &StormConfig) -> ParticleField {
    let dt = cfg.timestep;
    let mut particles = Vec::with_capacity(field.particles.len() + cfg.emission_rate);
    let mut removed = field.removed;
    for p in &field.particles {
        let v = cfg.velocity(p.position);
        // Grains that settle to the ground rest there and keep drifting with
        // the horizontal wind until the vortex lifts them again.
        let next = [
            p.position[0] + v[0] * dt,
            p.position[1] + v[1] * dt,
            (p.position[2] + v[2] * dt).max(cfg.bounds_min[2]),
        ];
        if cfg.in_bounds(next) {
            particles.push(Particle { position: next, radius: p.radius });
        } else {
            removed += 1;
        }
    }

    let mut rng = Stream::new(derive_seed(cfg.seed, 0x5707), field.step);
    let mut emitted = field.emitted;
    for _ in 0..cfg.emission_rate {
        let y = rng.uniform_in(cfg.source_span.0, cfg.source_span.1);
        let radius = rng.uniform_in(cfg.radius_range.0, cfg.radius_range.1);
        let position = [cfg.source_x, y, cfg.source_height];
        emitted += 1;
        if cfg.in_bounds(position) {
            particles.push(Particle { position, radius });
        } else {
            removed += 1;
        }
    }

    ParticleField {
        particles,
        time: field.time + dt,
        step: field.step + 1,
        emitted,
        removed,
    }
}

/// Cone-shaped beam from `tx` to `rx`, split into disks `disk_spacing` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamCone {
    pub tx: [f64; 3],
    pub rx: [f64; 3],
    pub half_angle: f64,
    pub disk_spacing: f64,
    axis: [f64; 3],
    length: f64,
    disks: usize,
}

pub fn build_beam_cone(tx: [f64; 3], rx: [f64; 3], half_angle: f64, disk_spacing: f64) -> Result<BeamCone> {
    let d = [rx[0] - tx[0], rx[1] - tx[1], rx[2] - tx[2]];
    let length = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if !(length > 0.0) {
        return Err(Error::domain("beam transmitter and receiver coincide"));
    }
    if !(half_angle > 0.0 && half_angle < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain("beam half-angle must lie in (0, π/2)"));
    }
    if !(disk_spacing > 0.0) {
        return Err(Error::domain("disk spacing must be positive"));
    }
    let disks = (length / disk_spacing * (1.0 + 1e-12)).floor() as usize;
    Ok(BeamCone {
        tx,
        rx,
        half_angle,
        disk_spacing,
        axis: [d[0] / length, d[1] / length, d[2] / length],
        length,
        disks,
    })
}

impl BeamCone {
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of disks; disk `i` (1-based) sits `i·spacing` from the apex.
    pub fn disk_count(&self) -> usize {
        self.disks
    }

    /// Radius of disk `i`; disk 0 is the apex.
    pub fn disk_radius(&self, i: usize) -> f64 {
        i.min(self.disks) as f64 * self.disk_spacing * self.half_angle.tan()
    }

    pub fn end_radius(&self) -> f64 {
        self.disk_radius(self.disks)
    }

    /// 1 m axial bins covering the beam.
    pub fn bin_count(&self) -> usize {
        self.length.ceil().max(1.0) as usize
    }

    /// Axial bin of `p` when it lies inside the beam.
    pub fn locate(&self, p: [f64; 3]) -> Option<usize> {
        let rel = [p[0] - self.tx[0], p[1] - self.tx[1], p[2] - self.tx[2]];
        let t = rel[0] * self.axis[0] + rel[1] * self.axis[1] + rel[2] * self.axis[2];
        if !(t >= 0.0 && t <= self.length) {
            return None;
        }
        let perp2 = rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2] - t * t;
        let radial = perp2.max(0.0).sqrt();
        // Interpolate between the two disks bracketing the particle.
        let s = t / self.disk_spacing;
        let i0 = (s.floor() as usize).min(self.disks);
        let i1 = (i0 + 1).min(self.disks);
        let w = (s - i0 as f64).clamp(0.0, 1.0);
        let local = if i0 == i1 {
            self.disk_radius(i0)
        } else {
            self.disk_radius(i0) * (1.0 - w) + self.disk_radius(i1) * w
        };
        (radial <= local).then(|| (t.floor() as usize).min(self.bin_count() - 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamCount {
    pub total: u64,
    /// Particles in each 1 m axial bin from the transmitter.
    pub per_meter: Vec<u64>,
}

pub fn count_in_beam(field: &ParticleField, cone: &BeamCone) -> BeamCount {
    let bins: Vec<usize> = field
        .particles
        .par_iter()
        .filter_map(|p| cone.locate(p.position))
        .collect();
    let mut per_meter = vec![0u64; cone.bin_count()];
    for b in &bins {
        per_meter[*b] += 1;
    }
    BeamCount { total: bins.len() as u64, per_meter }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySample {
    pub time: f64,
    pub count: BeamCount,
    /// Particles alive in the whole field at this time.
    pub population: usize,
}

/// Steps an initially empty field `steps` times and counts the beam after
/// each step.
pub fn density_time_series(cfg: &StormConfig, cone: &BeamCone, steps: usize) -> Result<Vec<DensitySample>> {
    cfg.validate()?;
    if steps == 0 {
        return Err(Error::domain("time series needs at least one step"));
    }
    let mut field = ParticleField::default();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        field = step_field(&field, cfg);
        out.push(DensitySample {
            time: field.time,
            count: count_in_beam(&field, cone),
            population: field.len(),
        });
    }
    Ok(out)
}

/// `t_s,count,density_per_m_bin_0,...` with one row per sample.
pub fn density_csv(samples: &[DensitySample]) -> String {
    let bins = samples.first().map_or(0, |s| s.count.per_meter.len());
    let mut out = String::from("t_s,count");
    for i in 0..bins {
        let _ = write!(out, ",density_per_m_bin_{i}");
    }
    out.push('\n');
    for s in samples {
        let _ = write!(out, "{},{}", s.time, s.count.total);
        for c in &s.count.per_meter {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    out
}

pub fn write_density_csv(samples: &[DensitySample], path: &Path) -> Result<()> {
    std::fs::write(path, density_csv(samples)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Writes one `x,y,z,r` row per particle.
pub fn write_snapshot_csv(field: &ParticleField, path: &Path) -> Result<()> {
    let mut out = String::from("x,y,z,r\n");
    for p in &field.particles {
        let _ = writeln!(out, "{},{},{},{}", p.position[0], p.position[1], p.position[2], p.radius);
    }
    std::fs::write(path, out).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn calm() -> StormConfig {
        StormConfig {
            vortex_strength: 0.0,
            updraft: 0.0,
            settling: 0.0,
            timestep: 1.0,
            ..StormConfig::default()
        }
    }

    #[test]
    fn no_emission_stays_empty() {
        let cfg = StormConfig { emission_rate: 0, ..StormConfig::default() };
        let f = step_field(&ParticleField::default(), &cfg);
        assert!(f.is_empty());
        assert_eq!(f.emitted, 0);
    }

    #[test]
    fn pure_advection_moves_only_x() {
        let cfg = calm();
        let mut f = ParticleField::default();
        for _ in 0..5 {
            f = step_field(&f, &cfg);
        }
        let next = step_field(&ParticleField { particles: f.particles.clone(), ..f.clone() }, &StormConfig { emission_rate: 0, ..cfg });
        assert_eq!(next.len(), f.len());
        for (a, b) in f.particles.iter().zip(&next.particles) {
            assert!(b.position[0] > a.position[0]);
            assert_eq!(a.position[1], b.position[1]);
            assert_eq!(a.position[2], b.position[2]);
        }
    }

    #[test]
    fn bookkeeping_is_exact() {
        let cfg = StormConfig { timestep: 20.0, ..StormConfig::default() };
        let mut f = ParticleField::default();
        for _ in 0..200 {
            f = step_field(&f, &cfg);
            assert_eq!(f.len() as u64, f.emitted - f.removed);
        }
        assert!(f.removed > 0);
    }

    #[test]
    fn settled_grains_rest_on_ground() {
        let cfg = StormConfig {
            settling: 0.5,
            updraft: 0.0,
            vortex_strength: 0.0,
            source_x: 0.0,
            source_height: 20.0,
            ..StormConfig::default()
        };
        let mut f = ParticleField::default();
        for _ in 0..3 {
            f = step_field(&f, &cfg);
        }
        let quiet = StormConfig { emission_rate: 0, ..cfg };
        let mut prev = f.len();
        for _ in 0..10 {
            f = step_field(&f, &quiet);
            assert!(f.len() <= prev);
            prev = f.len();
        }
        assert_eq!(f.len(), 300);
        assert!(f.particles.iter().all(|p| p.position[2] == 0.0 && p.position[0] > 0.0));
    }

    #[test]
    fn vortex_lifts_dust_through_beam_height() {
        let cfg = StormConfig::default();
        let mut f = ParticleField::default();
        let mut crossed = false;
        for _ in 0..700 {
            f = step_field(&f, &cfg);
            crossed |= f.particles.iter().any(|p| {
                let [x, _, z] = p.position;
                (5500.0..=6500.0).contains(&x) && z > 50.0
            });
        }
        assert!(crossed);
    }

    #[test]
    fn ten_km_beam_geometry() {
        let cone = build_beam_cone([0.0, 0.0, 50.0], [10_000.0, 0.0, 50.0], 1.5e-5, 0.01).unwrap();
        assert_eq!(cone.disk_count(), 1_000_000);
        assert!((cone.end_radius() - 0.15).abs() < 1e-3);
        assert!(build_beam_cone([1.0; 3], [1.0; 3], 0.1, 0.01).is_err());
    }

    #[test]
    fn axis_point_counted_once() {
        let cone = build_beam_cone([0.0, 0.0, 50.0], [10.0, 0.0, 50.0], 0.01, 0.01).unwrap();
        let field = ParticleField {
            particles: vec![Particle { position: [5.005, 0.0, 50.0], radius: 1e-6 }],
            ..ParticleField::default()
        };
        let c = count_in_beam(&field, &cone);
        assert_eq!(c.total, 1);
        assert_eq!(c.per_meter.iter().sum::<u64>(), 1);
        assert_eq!(c.per_meter[5], 1);
        assert_eq!(count_in_beam(&ParticleField::default(), &cone).total, 0);
    }

    #[test]
    fn doubling_emission_doubles_count() {
        let base = StormConfig {
            vortex_strength: 0.0,
            updraft: 0.0,
            settling: 0.0,
            advection_scale: 0.05,
            ramp_offset: 20.0,
            timestep: 0.5,
            source_x: 0.0,
            source_span: (-4.0, 4.0),
            source_height: 0.0,
            emission_rate: 200,
            bounds_max: [400.0, 50.0, 50.0],
            ..StormConfig::default()
        };
        let cone = build_beam_cone([0.0, 0.0, 0.0], [300.0, 0.0, 0.0], 0.01, 0.01).unwrap();
        let mean = |cfg: &StormConfig| {
            let s = density_time_series(cfg, &cone, 200).unwrap();
            s[100..].iter().map(|x| x.count.total as f64).sum::<f64>() / 100.0
        };
        let one = mean(&base);
        let two = mean(&StormConfig { emission_rate: 400, ..base });
        assert!(one > 10.0, "{one}");
        assert!((two / one - 2.0).abs() < 0.2, "{one} {two}");
    }
}
