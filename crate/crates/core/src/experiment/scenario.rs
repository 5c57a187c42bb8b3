use std::path::PathBuf;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Scenario};
use crate::atmosphere::{absorption_coefficient, bundled_catalog_dir, load_catalog, AbsorptionSpectrum};
use crate::link::{default_time_counts, run_distance_sweep, run_time_scenario, DistancePoint, TimePoint};
use crate::scatter::{ensemble_extinction, DensitySpec, MediumSpec};
use crate::storm::{build_beam_cone, density_time_series, DensitySample};
use crate::transport::{estimate_transmittance, TransportConfig};
use crate::{Error, Result};

/// One transport estimate at one sweep value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub replicate: usize,
    pub seed: u64,
    pub transmittance: f64,
    pub attenuation_db_per_m: f64,
    pub capacity_bps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionRow {
    pub f_hz: f64,
    pub k_rad_per_m: f64,
    pub lambda_m: f64,
    pub n0_per_m3: f64,
    pub c_ext_per_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioOutput {
    Sweep(Vec<SweepRow>),
    Time(Vec<TimePoint>),
    Distance(Vec<DistancePoint>),
    Storm(Vec<DensitySample>),
    Extinction(Vec<ExtinctionRow>),
    Spectrum(AbsorptionSpectrum),
}

impl ScenarioOutput {
    pub fn len(&self) -> usize {
        match self {
            ScenarioOutput::Sweep(r) => r.len(),
            ScenarioOutput::Time(r) => r.len(),
            ScenarioOutput::Distance(r) => r.len(),
            ScenarioOutput::Storm(r) => r.len(),
            ScenarioOutput::Extinction(r) => r.len(),
            ScenarioOutput::Spectrum(s) => s.k.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sweep_rows(&self) -> Option<&[SweepRow]> {
        match self {
            ScenarioOutput::Sweep(r) => Some(r),
            _ => None,
        }
    }
}

/// Runs `cfg` on its configured worker count, or the global pool when unset.
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<ScenarioOutput> {
    match cfg.workers {
        Some(n) => run_scenario_with_workers(cfg, n),
        None => run_inner(cfg),
    }
}

/// Runs `cfg` on a dedicated pool of `workers` threads. Output does not
/// depend on `workers`.
pub fn run_scenario_with_workers(cfg: &ExperimentConfig, workers: usize) -> Result<ScenarioOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_inner(cfg))
}

fn run_inner(cfg: &ExperimentConfig) -> Result<ScenarioOutput> {
    match cfg.scenario {
        s if s.is_sweep() => sweep(cfg).map(ScenarioOutput::Sweep),
        Scenario::TimeScenario => {
            let k = absorption_at(cfg, cfg.link.center)?;
            let counts = default_time_counts(cfg.planet, cfg.seconds, cfg.seed);
            let transport = TransportConfig { seed: cfg.seed, ..cfg.transport };
            run_time_scenario(&cfg.link, &cfg.medium, &counts, k, &transport).map(ScenarioOutput::Time)
        }
        Scenario::CapacityDistance => {
            let k = absorption_at(cfg, cfg.link.center)?;
            let transport = TransportConfig { seed: cfg.seed, ..cfg.transport };
            run_distance_sweep(&cfg.link, &cfg.medium, &cfg.range.values(), cfg.density_range, k, &transport)
                .map(ScenarioOutput::Distance)
        }
        Scenario::StormDensity => {
            let b = cfg.beam;
            let cone = build_beam_cone(b.tx, b.rx, b.half_angle, b.disk_spacing)?;
            density_time_series(&cfg.storm, &cone, cfg.storm_steps).map(ScenarioOutput::Storm)
        }
        Scenario::ExtinctionTable => {
            let n0 = cfg.medium.number_density()?;
            let rows = cfg
                .range
                .values()
                .par_iter()
                .map(|&f| {
                    let e = ensemble_extinction(&cfg.medium, f)?;
                    Ok(ExtinctionRow {
                        f_hz: f,
                        k_rad_per_m: e.wavenumber,
                        lambda_m: e.wavelength,
                        n0_per_m3: n0,
                        c_ext_per_m: e.c_ext,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ScenarioOutput::Extinction(rows))
        }
        Scenario::AbsorptionSpectrum => {
            let catalog = load_catalog(&catalog_dir(cfg), &cfg.mixture.gases())?;
            let grid = cfg.range.values();
            absorption_coefficient(&cfg.mixture, &catalog, &grid).map(ScenarioOutput::Spectrum)
        }
        _ => unreachable!("sweeps handled above"),
    }
}

fn catalog_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.catalog_dir.clone().unwrap_or_else(bundled_catalog_dir)
}

fn absorption_at(cfg: &ExperimentConfig, f: f64) -> Result<f64> {
    let catalog = load_catalog(&catalog_dir(cfg), &cfg.mixture.gases())?;
    Ok(absorption_coefficient(&cfg.mixture, &catalog, &[f])?.k[0])
}

/// Transport settings for one sweep value before the replicate seed is set.
fn sweep_point(cfg: &ExperimentConfig, value: f64) -> Result<TransportConfig> {
    let mut t = cfg.transport;
    let medium: MediumSpec;
    let frequency = match cfg.scenario {
        Scenario::FrequencySweep => value,
        _ => cfg.frequency,
    };
    match cfg.scenario {
        Scenario::McpSweep => {
            t.packets = value.round() as usize;
            medium = cfg.medium;
        }
        Scenario::VisibilitySweep => medium = cfg.medium.with_density(DensitySpec::Visibility(value)),
        Scenario::ParticleSweep => medium = cfg.medium.with_density(DensitySpec::linear(value / t.distance)),
        Scenario::DistanceSweep => {
            t.distance = value;
            medium = cfg.medium;
        }
        Scenario::FrequencySweep => medium = cfg.medium,
        other => unreachable!("{other} is not a sweep"),
    }
    t.c_ext = ensemble_extinction(&medium, frequency)?.c_ext;
    Ok(t)
}

/// Every replicate shares seed `seed + r` across all sweep values, so the
/// sweep varies only the swept quantity.
fn sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let values = cfg.range.values();
    let points = values
        .par_iter()
        .map(|&v| sweep_point(cfg, v))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> =
        (0..values.len()).flat_map(|i| (0..cfg.replicates).map(move |r| (i, r))).collect();
    let mut rows = jobs
        .par_iter()
        .map(|&(i, r)| {
            let seed = cfg.seed.wrapping_add(r as u64);
            let t = TransportConfig { seed, ..points[i] };
            let res = estimate_transmittance(&t)?;
            Ok(SweepRow {
                value: values[i],
                replicate: r,
                seed,
                transmittance: res.transmittance,
                attenuation_db_per_m: res.attenuation_db_per_m,
                capacity_bps: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.replicate.cmp(&b.replicate)));
    Ok(rows)
}
