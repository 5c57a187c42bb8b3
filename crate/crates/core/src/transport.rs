//! Monte Carlo photon-packet transport through a homogeneous dust slab.
//!
//! A packet enters at `(0, 0, h)` heading along +X with unit weight. It flies
//! exponentially distributed free paths at rate `C_ext`, loses weight by
//! Beer-Lambert attenuation along each flight, and is deflected at each
//! event by a Henyey-Greenstein angle. Its weight is credited to the receiver
//! only when a flight crosses the plane `X = D`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::rng::Stream;
use crate::{Error, Result};

/// Decibels per neper of intensity, as used for specific attenuation.
pub const DB_PER_NEPER: f64 = 4.343;

/// Above this |μx| the polar-axis form of the direction update is used.
const POLAR_AXIS_THRESHOLD: f64 = 0.99999;

/// Below this g the phase function is treated as isotropic.
const ISOTROPIC_G: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymmetryPolicy {
    Fixed(f64),
    /// Drawn uniformly from `[lo, hi]` at every scattering event.
    Uniform { lo: f64, hi: f64 },
}

impl Default for AsymmetryPolicy {
    fn default() -> Self {
        AsymmetryPolicy::Uniform { lo: 0.5, hi: 1.0 }
    }
}

/// Optional transverse limit; packets beyond it leave the beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LateralBound {
    /// Constant radius about the launch axis, m.
    Cylinder { radius: f64 },
    /// Radius growing as `X·tan(half_angle)` from the launch point.
    Cone { half_angle: f64 },
}

impl LateralBound {
    fn radius_at(&self, x: f64) -> f64 {
        match *self {
            LateralBound::Cylinder { radius } => radius,
            LateralBound::Cone { half_angle } => x.max(0.0) * half_angle.tan(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportConfig {
    /// Slab depth D, m.
    pub distance: f64,
    /// Packet count M.
    pub packets: usize,
    /// Extinction coefficient, 1/m.
    pub c_ext: f64,
    pub asymmetry: AsymmetryPolicy,
    /// Packets whose weight drops below this are discarded; 0 disables the cutoff.
    pub weight_threshold: f64,
    pub seed: u64,
    pub lateral_bound: Option<LateralBound>,
    /// Per-packet event cap.
    pub max_events: u64,
    /// Launch height, m. Does not affect the slab result.
    pub antenna_height: f64,
}

impl TransportConfig {
    pub fn new(distance: f64, packets: usize, c_ext: f64, seed: u64) -> Self {
        TransportConfig {
            distance,
            packets,
            c_ext,
            asymmetry: AsymmetryPolicy::default(),
            weight_threshold: 1e-5,
            seed,
            lateral_bound: None,
            max_events: 1_000_000,
            antenna_height: 50.0,
        }
    }

    pub fn with_asymmetry(mut self, asymmetry: AsymmetryPolicy) -> Self {
        self.asymmetry = asymmetry;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance > 0.0) || !self.distance.is_finite() {
            return Err(Error::domain(format!("distance must be positive, got {}", self.distance)));
        }
        if self.packets == 0 {
            return Err(Error::domain("packet count must be at least 1"));
        }
        if !(self.c_ext >= 0.0) || !self.c_ext.is_finite() {
            return Err(Error::domain(format!("extinction must be >= 0, got {}", self.c_ext)));
        }
        let g_ok = |g: f64| (0.0..=1.0).contains(&g);
        match self.asymmetry {
            AsymmetryPolicy::Fixed(g) if !g_ok(g) => {
                return Err(Error::domain(format!("asymmetry factor {g} outside [0, 1]")));
            }
            AsymmetryPolicy::Uniform { lo, hi } if !(g_ok(lo) && g_ok(hi) && lo <= hi) => {
                return Err(Error::domain(format!("asymmetry range [{lo}, {hi}] invalid")));
            }
            _ => {}
        }
        if !(self.weight_threshold >= 0.0 && self.weight_threshold < 1.0) {
            return Err(Error::domain("weight threshold must lie in [0, 1)"));
        }
        if self.max_events == 0 {
            return Err(Error::domain("max_events must be at least 1"));
        }
        match self.lateral_bound {
            Some(LateralBound::Cylinder { radius }) if !(radius > 0.0) => {
                Err(Error::domain("lateral radius must be positive"))
            }
            Some(LateralBound::Cone { half_angle }) if !(half_angle > 0.0 && half_angle < PI / 2.0) => {
                Err(Error::domain("lateral half-angle must lie in (0, π/2)"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketState {
    pub position: [f64; 3],
    /// Direction cosines (μx, μy, μz).
    pub direction: [f64; 3],
    pub weight: f64,
    pub events: u64,
}

impl PacketState {
    pub fn launch(height: f64) -> Self {
        PacketState {
            position: [0.0, 0.0, height],
            direction: [1.0, 0.0, 0.0],
            weight: 1.0,
            events: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fate {
    Reached,
    WeightKilled,
    BackscatterExit,
    LateralExit,
    GuardKilled,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FateCounts {
    pub reached: u64,
    pub weight_killed: u64,
    pub backscatter_exit: u64,
    pub lateral_exit: u64,
    pub guard_killed: u64,
}

impl FateCounts {
    fn record(&mut self, fate: Fate) {
        match fate {
            Fate::Reached => self.reached += 1,
            Fate::WeightKilled => self.weight_killed += 1,
            Fate::BackscatterExit => self.backscatter_exit += 1,
            Fate::LateralExit => self.lateral_exit += 1,
            Fate::GuardKilled => self.guard_killed += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.reached + self.weight_killed + self.backscatter_exit + self.lateral_exit + self.guard_killed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportResult {
    /// T_MS in [0, 1].
    pub transmittance: f64,
    /// A_MS in dB/m; `+∞` when nothing reached the receiver.
    pub attenuation_db_per_m: f64,
    pub fates: FateCounts,
    /// Mean number of scattering events per packet.
    pub mean_events: f64,
    pub seed: u64,
}

/// Outcome of one traced packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketOutcome {
    pub fate: Fate,
    /// Weight delivered to the receiver plane.
    pub contribution: f64,
    pub events: u64,
}

/// Free path −ln(u)/C_ext. `None` means free flight (C_ext = 0).
pub fn sample_step(u: f64, c_ext: f64) -> Option<f64> {
    if c_ext > 0.0 {
        Some(-u.ln() / c_ext)
    } else {
        None
    }
}

/// Henyey-Greenstein polar angle and uniform azimuth, `(θ, φ)` in radians.
pub fn sample_scatter_angles(nu: f64, chi: f64, g: f64) -> (f64, f64) {
    let cos_theta = if g < ISOTROPIC_G {
        2.0 * nu - 1.0
    } else {
        let frac = (1.0 - g * g) / (1.0 - g + 2.0 * g * nu);
        (1.0 + g * g - frac * frac) / (2.0 * g)
    };
    (cos_theta.clamp(-1.0, 1.0).acos(), 2.0 * PI * chi)
}

/// Rotates `mu` by polar angle `theta` and azimuth `phi`, returning a unit
/// vector.
pub fn update_direction(mu: [f64; 3], theta: f64, phi: f64) -> [f64; 3] {
    let [mx, my, mz] = mu;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let next = if mx.abs() > POLAR_AXIS_THRESHOLD {
        [mx.signum() * ct, st * cp, st * sp]
    } else {
        let s = (1.0 - mx * mx).sqrt();
        [
            -st * cp * s + mx * ct,
            st * (my * mx * cp - mz * sp) / s + my * ct,
            st * (mz * mx * cp + my * sp) / s + mz * ct,
        ]
    };
    let norm = (next[0] * next[0] + next[1] * next[1] + next[2] * next[2]).sqrt();
    [next[0] / norm, next[1] / norm, next[2] / norm]
}

/// Beer-Lambert weight after advancing `dx` along X with direction cosine `mu_x`.
pub fn update_weight(w_prev: f64, c_ext: f64, dx: f64, mu_x: f64) -> f64 {
    if dx == 0.0 {
        return w_prev;
    }
    w_prev * (-c_ext * dx / mu_x).exp()
}

fn draw_g(policy: AsymmetryPolicy, rng: &mut Stream) -> f64 {
    match policy {
        AsymmetryPolicy::Fixed(g) => g,
        AsymmetryPolicy::Uniform { lo, hi } => rng.uniform_in(lo, hi),
    }
}

/// Follows packet `index` until it reaches the receiver or is terminated.
///
/// Packets with equal `(seed, index)` follow the same trajectory in
/// optical-depth units for any `C_ext`, so sweeps sharing a seed are coupled.
pub fn trace_packet(cfg: &TransportConfig, index: u64) -> PacketOutcome {
    let mut rng = Stream::new(cfg.seed, index);
    let mut p = PacketState::launch(cfg.antenna_height);
    let d = cfg.distance;
    let c = cfg.c_ext;
    let done = |fate, contribution, events| PacketOutcome { fate, contribution, events };
    loop {
        let u = rng.uniform();
        let [mx, my, mz] = p.direction;
        let Some(step) = sample_step(u, c) else {
            // No extinction: the launch direction is never changed.
            return done(Fate::Reached, p.weight, p.events);
        };
        let x_next = p.position[0] + step * mx;
        if x_next >= d {
            // mx > 0 is guaranteed here, so the residual factor is bounded.
            let contribution = p.weight * (-c * (d - p.position[0]) / mx).exp();
            return done(Fate::Reached, contribution.clamp(0.0, 1.0), p.events);
        }
        let dx = x_next - p.position[0];
        p.weight = if mx.abs() > 1e-12 {
            update_weight(p.weight, c, dx, mx)
        } else {
            p.weight * (-c * step).exp()
        };
        p.position = [x_next, p.position[1] + step * my, p.position[2] + step * mz];

        if x_next < 0.0 {
            return done(Fate::BackscatterExit, 0.0, p.events);
        }
        if p.weight < cfg.weight_threshold {
            return done(Fate::WeightKilled, 0.0, p.events);
        }
        if let Some(bound) = cfg.lateral_bound {
            let dy = p.position[1];
            let dz = p.position[2] - cfg.antenna_height;
            if (dy * dy + dz * dz).sqrt() > bound.radius_at(x_next) {
                return done(Fate::LateralExit, 0.0, p.events);
            }
        }
        if p.events >= cfg.max_events {
            return done(Fate::GuardKilled, 0.0, p.events);
        }

        let g = draw_g(cfg.asymmetry, &mut rng);
        let nu = rng.uniform();
        let chi = rng.uniform();
        let (theta, phi) = sample_scatter_angles(nu, chi, g);
        p.direction = update_direction(p.direction, theta, phi);
        p.events += 1;
    }
}

/// Pairwise sum with a fixed split, so the rounding never depends on how the
/// work was scheduled.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// A_MS = −4.343·ln(T)/D; `+∞` for T = 0.
pub fn specific_attenuation(transmittance: f64, distance: f64) -> f64 {
    if transmittance <= 0.0 {
        return f64::INFINITY;
    }
    let a = -DB_PER_NEPER * transmittance.ln() / distance;
    if a == 0.0 {
        0.0
    } else {
        a
    }
}

fn summarize(cfg: &TransportConfig, outcomes: &[PacketOutcome]) -> TransportResult {
    let contributions: Vec<f64> = outcomes.iter().map(|o| o.contribution).collect();
    let transmittance = (pairwise_sum(&contributions) / cfg.packets as f64).clamp(0.0, 1.0);
    let mut fates = FateCounts::default();
    let mut events = 0u64;
    for o in outcomes {
        fates.record(o.fate);
        events += o.events;
    }
    TransportResult {
        transmittance,
        attenuation_db_per_m: specific_attenuation(transmittance, cfg.distance),
        fates,
        mean_events: events as f64 / cfg.packets as f64,
        seed: cfg.seed,
    }
}

/// Estimates T_MS and A_MS on the global rayon pool.
pub fn estimate_transmittance(cfg: &TransportConfig) -> Result<TransportResult> {
    cfg.validate()?;
    let outcomes: Vec<PacketOutcome> = (0..cfg.packets as u64)
        .into_par_iter()
        .map(|i| trace_packet(cfg, i))
        .collect();
    Ok(summarize(cfg, &outcomes))
}

/// Same as [`estimate_transmittance`] on a dedicated pool of `workers` threads.
pub fn estimate_transmittance_with_workers(cfg: &TransportConfig, workers: usize) -> Result<TransportResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot build worker pool: {e}")))?;
    pool.install(|| estimate_transmittance(cfg))
}

/// Runs `cfg` sequentially on the current thread.
pub fn estimate_transmittance_serial(cfg: &TransportConfig) -> Result<TransportResult> {
    cfg.validate()?;
    let outcomes: Vec<PacketOutcome> = (0..cfg.packets as u64).map(|i| trace_packet(cfg, i)).collect();
    Ok(summarize(cfg, &outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn step_examples() {
        assert!(sample_step(1.0 - 1e-16, 1.0).unwrap() < 1e-15);
        assert!(close(sample_step((-1.0f64).exp(), 0.1).unwrap(), 10.0, 1e-12));
        assert_eq!(sample_step(0.5, 0.0), None);
    }

    #[test]
    fn step_mean() {
        let mut rng = Stream::new(7, 0);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_step(rng.uniform(), 0.5).unwrap()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 2.0).abs() < 3.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn angle_examples() {
        let (t, p) = sample_scatter_angles(0.5, 0.25, 0.0);
        assert!(close(t, PI / 2.0, 1e-15) && close(p, PI / 2.0, 1e-15));
        assert!(close(sample_scatter_angles(1.0, 0.0, 0.5).0, 0.0, 1e-7));
        assert!(close(sample_scatter_angles(0.0, 0.0, 0.5).0, PI, 1e-7));
    }

    #[test]
    fn direction_examples() {
        let d = update_direction([1.0, 0.0, 0.0], PI / 2.0, 0.0);
        assert!(close(d[0], 0.0, 1e-15) && close(d[1], 1.0, 1e-15) && close(d[2], 0.0, 1e-15));
        let d = update_direction([0.0, 1.0, 0.0], PI / 2.0, 0.0);
        assert!(close(d[0], -1.0, 1e-15) && close(d[1], 0.0, 1e-15) && close(d[2], 0.0, 1e-15));
        let mu = [0.48, -0.6, 0.64];
        let d = update_direction(mu, 0.0, 1.3);
        for k in 0..3 {
            assert!(close(d[k], mu[k], 1e-12));
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(update_weight(0.7, 0.3, 0.0, 0.2), 0.7);
        assert!(close(update_weight(1.0, 0.2, 5.0, 1.0), 0.367879441171, 1e-12));
        assert!(close(update_weight(0.5, 0.1, 2.0, 0.5), 0.335160023, 1e-9));
    }

    #[test]
    fn clear_sky() {
        let r = estimate_transmittance(&TransportConfig::new(10.0, 100, 0.0, 1)).unwrap();
        assert_eq!(r.transmittance, 1.0);
        assert_eq!(r.attenuation_db_per_m, 0.0);
        assert!(r.attenuation_db_per_m.is_sign_positive());
        assert_eq!(r.fates.reached, 100);
    }

    #[test]
    fn forward_limit() {
        let cfg = TransportConfig::new(10.0, 1000, 0.3, 5).with_asymmetry(AsymmetryPolicy::Fixed(1.0));
        let r = estimate_transmittance(&cfg).unwrap();
        assert!(close(r.transmittance, (-3.0f64).exp(), 1e-9));
        assert!(close(r.attenuation_db_per_m, 1.3029, 1e-4));
    }

    #[test]
    fn packet_determinism() {
        let cfg = TransportConfig::new(20.0, 10, 0.2, 99);
        assert_eq!(trace_packet(&cfg, 3), trace_packet(&cfg, 3));
    }

    #[test]
    fn fates_sum_to_packets() {
        let mut cfg = TransportConfig::new(30.0, 2000, 0.4, 11).with_asymmetry(AsymmetryPolicy::Fixed(0.2));
        cfg.lateral_bound = Some(LateralBound::Cylinder { radius: 3.0 });
        let r = estimate_transmittance(&cfg).unwrap();
        assert_eq!(r.fates.total(), 2000);
        assert!(r.fates.backscatter_exit > 0);
        assert!(r.fates.lateral_exit > 0);
    }

    #[test]
    fn unreached_is_infinite_attenuation() {
        assert_eq!(specific_attenuation(0.0, 10.0), f64::INFINITY);
    }

    #[test]
    fn guard_terminates() {
        let mut cfg = TransportConfig::new(1e6, 4, 1.0, 3).with_asymmetry(AsymmetryPolicy::Fixed(0.9));
        cfg.max_events = 5;
        cfg.weight_threshold = 1e-300;
        let r = estimate_transmittance(&cfg).unwrap();
        assert!(r.fates.guard_killed + r.fates.backscatter_exit == 4);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let cfg = TransportConfig::new(15.0, 3000, 0.25, 42);
        let a = estimate_transmittance_with_workers(&cfg, 1).unwrap();
        let b = estimate_transmittance_with_workers(&cfg, 7).unwrap();
        let c = estimate_transmittance_serial(&cfg).unwrap();
        assert_eq!(a.transmittance.to_bits(), b.transmittance.to_bits());
        assert_eq!(a, c);
    }

    #[test]
    fn invalid_configs() {
        assert!(TransportConfig::new(0.0, 10, 0.1, 0).validate().is_err());
        assert!(TransportConfig::new(1.0, 0, 0.1, 0).validate().is_err());
        assert!(TransportConfig::new(1.0, 1, -0.1, 0).validate().is_err());
        let bad = TransportConfig::new(1.0, 1, 0.1, 0).with_asymmetry(AsymmetryPolicy::Uniform { lo: 0.9, hi: 0.5 });
        assert!(bad.validate().is_err());
    }
}
