use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::{ExperimentConfig, Scale};
use super::scenario::ScenarioOutput;
use super::svg::{line_plot, PlotSeries};
use crate::link::{distance_csv, time_csv};
use crate::storm::density_csv;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
}

/// The scenario's CSV. Floats use shortest round-trip formatting and lines
/// end in LF.
pub fn format_csv(output: &ScenarioOutput) -> String {
    match output {
        ScenarioOutput::Sweep(rows) => {
            let with_capacity = rows.iter().any(|r| r.capacity_bps.is_some());
            let mut s = String::from("value,replicate,seed,T_MS,A_dB_per_m");
            s.push_str(if with_capacity { ",capacity_bps\n" } else { "\n" });
            for r in rows {
                let _ = write!(
                    s,
                    "{},{},{},{},{}",
                    r.value, r.replicate, r.seed, r.transmittance, r.attenuation_db_per_m
                );
                if with_capacity {
                    match r.capacity_bps {
                        Some(c) => {
                            let _ = write!(s, ",{c}");
                        }
                        None => s.push(','),
                    }
                }
                s.push('\n');
            }
            s
        }
        ScenarioOutput::Time(points) => time_csv(points),
        ScenarioOutput::Distance(points) => distance_csv(points),
        ScenarioOutput::Storm(samples) => density_csv(samples),
        ScenarioOutput::Extinction(rows) => {
            let mut s = String::from("f_hz,k_rad_per_m,lambda_m,n0_per_m3,c_ext_per_m\n");
            for r in rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.f_hz, r.k_rad_per_m, r.lambda_m, r.n0_per_m3, r.c_ext_per_m);
            }
            s
        }
        ScenarioOutput::Spectrum(spectrum) => {
            let mut s = String::from("f_hz,k_per_m\n");
            for (f, k) in spectrum.frequencies.iter().zip(&spectrum.k) {
                let _ = writeln!(s, "{f},{k}");
            }
            s
        }
    }
}

fn plot_series(output: &ScenarioOutput, cfg: &ExperimentConfig) -> PlotSeries {
    let (name, unit) = cfg.scenario.variable();
    let x_label = format!("{name} ({unit})");
    let (y_label, points): (&str, Vec<(f64, f64)>) = match output {
        ScenarioOutput::Sweep(rows) => {
            // Replicate mean at each value.
            let mut pts: Vec<(f64, f64, usize)> = Vec::new();
            for r in rows {
                match pts.last_mut() {
                    Some(p) if p.0 == r.value => {
                        p.1 += r.attenuation_db_per_m;
                        p.2 += 1;
                    }
                    _ => pts.push((r.value, r.attenuation_db_per_m, 1)),
                }
            }
            ("attenuation (dB/m)", pts.into_iter().map(|(x, s, n)| (x, s / n as f64)).collect())
        }
        ScenarioOutput::Time(p) => ("capacity (bit/s)", p.iter().map(|p| (p.t_s, p.result.capacity_bps)).collect()),
        ScenarioOutput::Distance(p) => {
            ("capacity (bit/s)", p.iter().map(|p| (p.distance, p.result.capacity_bps)).collect())
        }
        ScenarioOutput::Storm(s) => ("particles in beam (count)", s.iter().map(|s| (s.time, s.count.total as f64)).collect()),
        ScenarioOutput::Extinction(r) => ("extinction (1/m)", r.iter().map(|r| (r.f_hz, r.c_ext_per_m)).collect()),
        ScenarioOutput::Spectrum(s) => {
            ("absorption coefficient (1/m)", s.frequencies.iter().copied().zip(s.k.iter().copied()).collect())
        }
    };
    PlotSeries {
        x_label,
        y_label: y_label.to_string(),
        points,
        log_x: cfg.scenario.is_sweep() && cfg.range.scale == Scale::Log,
    }
}

/// Writes `<output>/<scenario>_<planet>.csv`, and the matching `.svg` when
/// plotting is on. Creates the output directory if needed.
pub fn write_outputs(output: &ScenarioOutput, cfg: &ExperimentConfig) -> Result<OutputFiles> {
    if output.is_empty() {
        return Err(Error::domain("scenario produced no rows"));
    }
    let dir = &cfg.output;
    fs::create_dir_all(dir).map_err(|source| io(dir, source))?;
    let stem = format!("{}_{}", cfg.scenario.name(), cfg.planet.name());
    let csv = dir.join(format!("{stem}.csv"));
    fs::write(&csv, format_csv(output)).map_err(|source| io(&csv, source))?;
    let svg = if cfg.plot {
        let path = dir.join(format!("{stem}.svg"));
        fs::write(&path, line_plot(&plot_series(output, cfg))).map_err(|source| io(&path, source))?;
        Some(path)
    } else {
        None
    };
    Ok(OutputFiles { csv, svg })
}

fn io(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::scenario::SweepRow;
    use crate::experiment::parse_config;

    fn rows(n: usize) -> ScenarioOutput {
        ScenarioOutput::Sweep(
            (0..n)
                .map(|i| SweepRow {
                    value: 10.0 * (i + 1) as f64,
                    replicate: 0,
                    seed: 7,
                    transmittance: 1.0 / (i as f64 + 3.0),
                    attenuation_db_per_m: 0.1 + i as f64 / 3.0,
                    capacity_bps: None,
                })
                .collect(),
        )
    }

    #[test]
    fn five_rows_six_lines() {
        let csv = format_csv(&rows(5));
        assert_eq!(csv.lines().count(), 6);
        assert!(!csv.contains('\r'));
        assert!(csv.starts_with("value,replicate,seed,T_MS,A_dB_per_m\n"));
    }

    #[test]
    fn round_trip_values() {
        let out = rows(4);
        let csv = format_csv(&out);
        let parsed: Vec<Vec<f64>> =
            csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
        for (p, r) in parsed.iter().zip(out.sweep_rows().unwrap()) {
            assert_eq!(p[0].to_bits(), r.value.to_bits());
            assert_eq!(p[3].to_bits(), r.transmittance.to_bits());
            assert_eq!(p[4].to_bits(), r.attenuation_db_per_m.to_bits());
        }
    }

    #[test]
    fn files_and_plot() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = parse_config("scenario=mcp_sweep\nplot=true").unwrap();
        cfg.output = dir.path().join("nested");
        let files = write_outputs(&rows(5), &cfg).unwrap();
        assert_eq!(files.csv.file_name().unwrap(), "mcp_sweep_earth.csv");
        let svg = fs::read_to_string(files.svg.unwrap()).unwrap();
        assert!(svg.contains("packets (count)"));
        cfg.plot = false;
        assert!(write_outputs(&rows(5), &cfg).unwrap().svg.is_none());
    }

    #[test]
    fn unwritable_directory_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let mut cfg = parse_config("scenario=mcp_sweep").unwrap();
        cfg.output = blocker.join("sub");
        match write_outputs(&rows(2), &cfg) {
            Err(Error::Io { path, .. }) => assert!(path.starts_with(&blocker)),
            other => panic!("{other:?}"),
        }
    }
}
