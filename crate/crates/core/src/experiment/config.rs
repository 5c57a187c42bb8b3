use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::atmosphere::{GasMixture, LineShape};
use crate::link::{dbm_to_watts, LinkConfig};
use crate::scatter::{
    Approximation, DensitySpec, MediumSpec, MieNormalization, SizeDistribution, SizeDistributionKind,
};
use crate::storm::StormConfig;
use crate::transport::{AsymmetryPolicy, TransportConfig};
use crate::{Error, Planet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    McpSweep,
    VisibilitySweep,
    ParticleSweep,
    DistanceSweep,
    FrequencySweep,
    TimeScenario,
    CapacityDistance,
    StormDensity,
    ExtinctionTable,
    AbsorptionSpectrum,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::McpSweep,
        Scenario::VisibilitySweep,
        Scenario::ParticleSweep,
        Scenario::DistanceSweep,
        Scenario::FrequencySweep,
        Scenario::TimeScenario,
        Scenario::CapacityDistance,
        Scenario::StormDensity,
        Scenario::ExtinctionTable,
        Scenario::AbsorptionSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::McpSweep => "mcp_sweep",
            Scenario::VisibilitySweep => "visibility_sweep",
            Scenario::ParticleSweep => "particle_sweep",
            Scenario::DistanceSweep => "distance_sweep",
            Scenario::FrequencySweep => "frequency_sweep",
            Scenario::TimeScenario => "time_scenario",
            Scenario::CapacityDistance => "capacity_distance",
            Scenario::StormDensity => "storm_density",
            Scenario::ExtinctionTable => "extinction_table",
            Scenario::AbsorptionSpectrum => "absorption_spectrum",
        }
    }

    /// Transmittance sweeps that emit the common sweep schema.
    pub fn is_sweep(self) -> bool {
        matches!(
            self,
            Scenario::McpSweep
                | Scenario::VisibilitySweep
                | Scenario::ParticleSweep
                | Scenario::DistanceSweep
                | Scenario::FrequencySweep
        )
    }

    pub fn needs_catalog(self) -> bool {
        matches!(self, Scenario::TimeScenario | Scenario::CapacityDistance | Scenario::AbsorptionSpectrum)
    }

    /// Name and unit of the swept variable.
    pub fn variable(self) -> (&'static str, &'static str) {
        match self {
            Scenario::McpSweep => ("packets", "count"),
            Scenario::VisibilitySweep => ("visibility", "m"),
            Scenario::ParticleSweep => ("particles on beam", "count"),
            Scenario::DistanceSweep | Scenario::CapacityDistance => ("distance", "m"),
            Scenario::FrequencySweep | Scenario::ExtinctionTable | Scenario::AbsorptionSpectrum => {
                ("frequency", "Hz")
            }
            Scenario::TimeScenario | Scenario::StormDensity => ("time", "s"),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scenario> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s.trim())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown scenario `{}`", s.trim())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// Inclusive sweep range with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl Range {
    pub fn new(start: f64, stop: f64, steps: usize, scale: Scale) -> Self {
        Range { start, stop, steps, scale }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidConfig("range bounds must be finite".into()));
        }
        if self.start > self.stop {
            return Err(Error::InvalidConfig(format!(
                "range.start ({}) exceeds range.stop ({})",
                self.start, self.stop
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("range.steps must be at least 1".into()));
        }
        if self.scale == Scale::Log && !(self.start > 0.0) {
            return Err(Error::InvalidConfig("log range needs range.start > 0".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.steps {
                    return self.stop;
                }
                let w = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.start + w * (self.stop - self.start),
                    Scale::Log => 10f64.powf(self.start.log10() + w * (self.stop.log10() - self.start.log10())),
                }
            })
            .collect()
    }
}

/// Every key accepted in a config file.
pub const CONFIG_KEYS: &[&str] = &[
    "scenario",
    "planet",
    "seed",
    "output",
    "catalog_dir",
    "plot",
    "replicates",
    "workers",
    "range.start",
    "range.stop",
    "range.steps",
    "range.scale",
    "transport.packets",
    "transport.distance",
    "transport.g_min",
    "transport.g_max",
    "transport.g_fixed",
    "transport.weight_threshold",
    "transport.max_events",
    "transport.antenna_height",
    "dust.frequency",
    "dust.count",
    "dust.density_per_m",
    "dust.visibility",
    "dust.distribution",
    "dust.median_radius",
    "dust.sigma_g",
    "dust.r_min",
    "dust.r_max",
    "dust.mie",
    "dust.charge_density",
    "dust.field_scale",
    "link.power_dbm",
    "link.noise_psd",
    "link.band_lo",
    "link.band_hi",
    "link.distance",
    "link.seconds",
    "link.density_lo",
    "link.density_hi",
    "atmosphere.temperature",
    "atmosphere.pressure_mb",
    "atmosphere.h2o",
    "atmosphere.shape",
    "storm.steps",
    "storm.emission_rate",
    "storm.timestep",
    "storm.vortex_strength",
    "storm.vortex_core",
    "storm.updraft",
    "storm.settling",
    "storm.advection_scale",
    "storm.ramp_offset",
    "storm.source_x",
    "storm.half_angle",
    "storm.disk_spacing",
    "storm.tx_x",
    "storm.rx_x",
    "storm.beam_height",
];

/// Config text as parsed: each key maps to its raw value and line number.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    /// Parses `key = value` lines. `#` starts a comment. Several
    /// `key=value` pairs may share a line when separated by whitespace.
    pub fn parse(text: &str) -> Result<RawConfig> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let pairs: Vec<&str> = if body.matches('=').count() > 1 {
                body.split_whitespace().collect()
            } else {
                vec![body]
            };
            for pair in pairs {
                let (key, value) = pair.split_once('=').ok_or_else(|| Error::ConfigSyntax {
                    line: line_no,
                    message: format!("expected `key = value`, found `{pair}`"),
                })?;
                let key = key.trim();
                let value = value.trim();
                if !CONFIG_KEYS.contains(&key) {
                    return Err(Error::UnknownKey(key.to_string()));
                }
                if value.is_empty() {
                    return Err(Error::ConfigSyntax { line: line_no, message: format!("`{key}` has no value") });
                }
                if raw.entries.contains_key(key) {
                    return Err(Error::ConfigSyntax { line: line_no, message: format!("duplicate key `{key}`") });
                }
                raw.entries.insert(key.to_string(), (value.to_string(), line_no));
            }
        }
        Ok(raw)
    }

    /// Sets or replaces a key, e.g. from a command-line flag.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::UnknownKey(key.to_string()));
        }
        self.entries.insert(key.to_string(), (value.into(), 0));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<T>().map(Some).map_err(|_| {
                let message = format!("`{key}`: cannot parse `{v}` as {what}");
                if *line == 0 {
                    Error::InvalidConfig(message)
                } else {
                    Error::ConfigSyntax { line: *line, message }
                }
            }),
        }
    }

    fn num(&self, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.parsed(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(Error::InvalidConfig(format!("`{key}` must be finite"))),
            other => Ok(other),
        }
    }

    fn int(&self, key: &str) -> Result<Option<u64>> {
        self.parsed(key, "a non-negative integer")
    }

    fn flag(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some("true" | "yes" | "1" | "on") => Ok(Some(true)),
            Some("false" | "no" | "0" | "off") => Ok(Some(false)),
            Some(_) => self.parsed::<bool>(key, "a boolean"),
        }
    }

    /// Fills every unset value from the planet preset and validates.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let scenario: Scenario = self
            .get("scenario")
            .ok_or_else(|| Error::InvalidConfig("missing `scenario`".into()))?
            .parse()?;
        let planet: Planet = self.get("planet").unwrap_or("earth").parse()?;
        let preset = planet.preset();
        let seed = self.int("seed")?.unwrap_or(1);

        // Dust population.
        let r_min = self.num("dust.r_min")?.unwrap_or(preset.size_distribution.r_min());
        let r_max = self.num("dust.r_max")?.unwrap_or(preset.size_distribution.r_max());
        let (default_median, default_sigma) = match preset.size_distribution.kind() {
            SizeDistributionKind::LogNormal { median_radius, geometric_sigma } => (median_radius, geometric_sigma),
            SizeDistributionKind::PointMass { radius } => (radius, 2.0),
        };
        let median = self.num("dust.median_radius")?.unwrap_or(default_median);
        let distribution = match self.get("dust.distribution").unwrap_or("lognormal") {
            "lognormal" => {
                SizeDistribution::log_normal(median, self.num("dust.sigma_g")?.unwrap_or(default_sigma), r_min, r_max)
            }
            "point" => SizeDistribution::point_mass(median, r_min, r_max),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "dust.distribution must be lognormal or point, got `{other}`"
                )))
            }
        }
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

        let transport_distance = self.num("transport.distance")?.unwrap_or(preset.distance);
        let count = self.num("dust.count")?.unwrap_or(preset.dust_count);
        let density_per_m = self.num("dust.density_per_m")?.unwrap_or(count / transport_distance);
        let density = match self.num("dust.visibility")? {
            Some(v) => DensitySpec::Visibility(v),
            None => DensitySpec::linear(density_per_m),
        };
        let mut medium = MediumSpec::new(distribution, preset.permittivity, density);
        if let Approximation::Mie(_) = medium.approximation {
            let norm = match self.get("dust.mie").unwrap_or("cross_section") {
                "cross_section" => MieNormalization::CrossSection,
                "as_printed" => MieNormalization::AsPrinted,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "dust.mie must be cross_section or as_printed, got `{other}`"
                    )))
                }
            };
            medium.approximation = Approximation::Mie(norm);
        }
        medium.charge_density = self.num("dust.charge_density")?.unwrap_or(0.0);
        medium.field_scale = self.num("dust.field_scale")?.unwrap_or(1.0);
        medium.number_density().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if density_per_m < 0.0 || count < 0.0 {
            return Err(Error::InvalidConfig("dust densities must be non-negative".into()));
        }

        // Transport template.
        let packets = self.int("transport.packets")?.unwrap_or(preset.packets as u64) as usize;
        let asymmetry = match self.num("transport.g_fixed")? {
            Some(g) => AsymmetryPolicy::Fixed(g),
            None => AsymmetryPolicy::Uniform {
                lo: self.num("transport.g_min")?.unwrap_or(0.5),
                hi: self.num("transport.g_max")?.unwrap_or(1.0),
            },
        };
        let mut transport = TransportConfig::new(transport_distance, packets, 0.0, seed).with_asymmetry(asymmetry);
        if let Some(w) = self.num("transport.weight_threshold")? {
            transport.weight_threshold = w;
        }
        if let Some(m) = self.int("transport.max_events")? {
            transport.max_events = m;
        }
        transport.antenna_height = self.num("transport.antenna_height")?.unwrap_or(preset.antenna_height);
        transport.validate().map_err(|e| Error::InvalidConfig(e.to_string()))?;

        let frequency = self.num("dust.frequency")?.unwrap_or(preset.frequency);
        if !(frequency > 0.0) {
            return Err(Error::InvalidConfig("dust.frequency must be positive".into()));
        }

        // Link.
        let mut link = LinkConfig::for_planet(planet);
        link.band = (
            self.num("link.band_lo")?.unwrap_or(link.band.0),
            self.num("link.band_hi")?.unwrap_or(link.band.1),
        );
        link.center = 0.5 * (link.band.0 + link.band.1);
        link.tx_power = dbm_to_watts(self.num("link.power_dbm")?.unwrap_or(10.0));
        link.noise_psd = self.num("link.noise_psd")?.unwrap_or(link.noise_psd);
        link.distance = self.num("link.distance")?.unwrap_or(1.0);
        link.validate().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let seconds = self.int("link.seconds")?.unwrap_or(20) as usize;
        let (dlo, dhi) = match planet {
            Planet::Earth => (100.0, 200.0),
            Planet::Mars => (1000.0, 2000.0),
        };
        let density_range = (
            self.num("link.density_lo")?.unwrap_or(dlo),
            self.num("link.density_hi")?.unwrap_or(dhi),
        );
        if !(density_range.0 >= 0.0 && density_range.0 <= density_range.1) {
            return Err(Error::InvalidConfig("link density range must satisfy 0 <= lo <= hi".into()));
        }

        // Atmosphere.
        let temperature = self.num("atmosphere.temperature")?.unwrap_or(preset.temperature);
        let pressure_mb = self.num("atmosphere.pressure_mb")?.unwrap_or(preset.pressure_mb);
        let mixture = match planet {
            Planet::Earth => GasMixture::earth_with(temperature, pressure_mb, self.num("atmosphere.h2o")?.unwrap_or(0.01)),
            Planet::Mars => GasMixture::mars_with(temperature, pressure_mb, self.num("atmosphere.h2o")?.unwrap_or(250e-6)),
        };
        let mixture = match self.get("atmosphere.shape") {
            None => mixture,
            Some("lorentz") => mixture.with_shape(LineShape::Lorentz),
            Some("doppler") => mixture.with_shape(LineShape::Doppler),
            Some(other) => {
                return Err(Error::InvalidConfig(format!(
                    "atmosphere.shape must be lorentz or doppler, got `{other}`"
                )))
            }
        };
        if !(temperature > 0.0 && pressure_mb > 0.0) {
            return Err(Error::InvalidConfig("atmosphere temperature and pressure must be positive".into()));
        }

        // Storm.
        let mut storm = StormConfig { seed, ..StormConfig::default() };
        storm.radius_range = (r_min, r_max);
        let set = |v: Option<f64>, slot: &mut f64| {
            if let Some(x) = v {
                *slot = x;
            }
        };
        set(self.num("storm.timestep")?, &mut storm.timestep);
        set(self.num("storm.vortex_strength")?, &mut storm.vortex_strength);
        set(self.num("storm.vortex_core")?, &mut storm.vortex_core);
        set(self.num("storm.updraft")?, &mut storm.updraft);
        set(self.num("storm.settling")?, &mut storm.settling);
        set(self.num("storm.advection_scale")?, &mut storm.advection_scale);
        set(self.num("storm.ramp_offset")?, &mut storm.ramp_offset);
        set(self.num("storm.source_x")?, &mut storm.source_x);
        if let Some(e) = self.int("storm.emission_rate")? {
            storm.emission_rate = e as usize;
        }
        storm.validate().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let storm_steps = self.int("storm.steps")?.unwrap_or(600) as usize;
        let beam_height = self.num("storm.beam_height")?.unwrap_or(preset.antenna_height);
        let beam = BeamSpec {
            tx: [self.num("storm.tx_x")?.unwrap_or(5500.0), 0.0, beam_height],
            rx: [self.num("storm.rx_x")?.unwrap_or(6500.0), 0.0, beam_height],
            half_angle: self.num("storm.half_angle")?.unwrap_or(1.5e-5),
            disk_spacing: self.num("storm.disk_spacing")?.unwrap_or(0.01),
        };

        let range = self.range(scenario, planet)?;
        let replicates = self.int("replicates")?.unwrap_or(10) as usize;
        if replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        let workers = match self.int("workers")? {
            Some(0) => return Err(Error::InvalidConfig("workers must be at least 1".into())),
            other => other.map(|w| w as usize),
        };

        Ok(ExperimentConfig {
            scenario,
            planet,
            seed,
            output: PathBuf::from(self.get("output").unwrap_or("out")),
            catalog_dir: self.get("catalog_dir").map(PathBuf::from),
            plot: self.flag("plot")?.unwrap_or(false),
            replicates,
            workers,
            range,
            transport,
            medium,
            frequency,
            link,
            seconds,
            density_range,
            mixture,
            storm,
            storm_steps,
            beam,
        })
    }

    fn range(&self, scenario: Scenario, planet: Planet) -> Result<Range> {
        use Scale::*;
        let thz = 1e12;
        let default = match (scenario, planet) {
            (Scenario::McpSweep, _) => Range::new(10.0, 10_000.0, 4, Log),
            (Scenario::VisibilitySweep, _) => Range::new(10.0, 10_000.0, 13, Log),
            (Scenario::ParticleSweep, _) => Range::new(10.0, 10_000.0, 13, Log),
            (Scenario::DistanceSweep, _) => Range::new(1.0, 200.0, 20, Linear),
            (Scenario::FrequencySweep, Planet::Earth) => Range::new(0.1 * thz, 4.0 * thz, 14, Linear),
            (Scenario::FrequencySweep, Planet::Mars) => Range::new(0.1 * thz, 10.0 * thz, 12, Linear),
            (Scenario::CapacityDistance, _) => Range::new(1.0, 200.0, 200, Linear),
            (Scenario::ExtinctionTable, Planet::Earth) => Range::new(0.1 * thz, 4.0 * thz, 40, Linear),
            (Scenario::ExtinctionTable, Planet::Mars) => Range::new(0.1 * thz, 10.0 * thz, 100, Linear),
            (Scenario::AbsorptionSpectrum, Planet::Earth) => Range::new(0.1 * thz, 1.0 * thz, 901, Linear),
            (Scenario::AbsorptionSpectrum, Planet::Mars) => Range::new(0.1 * thz, 2.0 * thz, 1901, Linear),
            (Scenario::TimeScenario | Scenario::StormDensity, _) => Range::new(0.0, 0.0, 1, Linear),
        };
        let scale = match self.get("range.scale") {
            None => default.scale,
            Some("linear") => Linear,
            Some("log") => Log,
            Some(other) => {
                return Err(Error::InvalidConfig(format!("range.scale must be linear or log, got `{other}`")))
            }
        };
        let mut range = Range {
            start: self.num("range.start")?.unwrap_or(default.start),
            stop: self.num("range.stop")?.unwrap_or(default.stop),
            steps: self.int("range.steps")?.map_or(default.steps, |s| s as usize),
            scale,
        };
        if scenario == Scenario::FrequencySweep && planet == Planet::Earth {
            range.stop = range.stop.min(4.0 * thz);
        }
        range.validate()?;
        if scenario == Scenario::FrequencySweep && !(range.start > 0.0) {
            return Err(Error::InvalidConfig("frequency range must start above 0".into()));
        }
        Ok(range)
    }
}

/// Geometry of the counting beam in the storm scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    pub tx: [f64; 3],
    pub rx: [f64; 3],
    pub half_angle: f64,
    pub disk_spacing: f64,
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub planet: Planet,
    pub seed: u64,
    pub output: PathBuf,
    pub catalog_dir: Option<PathBuf>,
    pub plot: bool,
    /// Seeds per sweep point; replicate r uses `seed + r`.
    pub replicates: usize,
    pub workers: Option<usize>,
    pub range: Range,
    /// Template for every transport run; distance and seed are per point.
    pub transport: TransportConfig,
    pub medium: MediumSpec,
    /// Carrier for the transmittance sweeps, Hz.
    pub frequency: f64,
    pub link: LinkConfig,
    pub seconds: usize,
    /// Per-meter dust range for the capacity-distance scenario.
    pub density_range: (f64, f64),
    pub mixture: GasMixture,
    pub storm: StormConfig,
    pub storm_steps: usize,
    pub beam: BeamSpec,
}

/// Parses and resolves a config file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    RawConfig::parse(text)?.resolve()
}
