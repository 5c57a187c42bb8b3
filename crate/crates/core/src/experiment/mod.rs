//! Reproducible experiment runs: configuration, scenario orchestration and
//! CSV/SVG output.

mod config;
mod output;
mod scenario;
mod svg;

pub use config::{parse_config, ExperimentConfig, Range, RawConfig, Scale, Scenario, CONFIG_KEYS};
pub use output::{format_csv, write_outputs, OutputFiles};
pub use scenario::{run_scenario, run_scenario_with_workers, ExtinctionRow, ScenarioOutput, SweepRow};
pub use svg::{line_plot, PlotSeries};
