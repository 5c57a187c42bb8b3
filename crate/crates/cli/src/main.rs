use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dustlink::experiment::{run_scenario, write_outputs, RawConfig, Scenario};
use dustlink::{Error, Planet};

const CATALOG_ENV: &str = "DUSTLINK_CATALOG_DIR";

/// Runs one dust-channel scenario and writes its CSV (and optional SVG).
#[derive(Debug, Parser)]
#[command(name = "dustlink", version)]
struct Args {
    /// Scenario to run.
    #[arg(value_parser = parse_scenario)]
    scenario: Scenario,
    /// Key-value config file; unset keys take planet preset values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG line plot.
    #[arg(long)]
    plot: bool,
    /// Directory of .par line catalogs. Falls back to $DUSTLINK_CATALOG_DIR,
    /// then to the bundled catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_parser = parse_planet)]
    planet: Option<Planet>,
    /// Worker threads; output is identical for any count.
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_planet(s: &str) -> Result<Planet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config() {
        2
    } else if e.is_data() {
        3
    } else {
        4
    }
}

fn run(args: Args) -> Result<(), (u8, Error)> {
    let config = |e: Error| (exit_code(&e), e);
    let mut raw = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| (2, Error::Io { path: path.clone(), source }))?;
            RawConfig::parse(&text).map_err(config)?
        }
        None => RawConfig::default(),
    };
    raw.set("scenario", args.scenario.name()).map_err(config)?;
    if let Some(seed) = args.seed {
        raw.set("seed", seed.to_string()).map_err(config)?;
    }
    if let Some(out) = &args.out {
        raw.set("output", out.display().to_string()).map_err(config)?;
    }
    if args.plot {
        raw.set("plot", "true").map_err(config)?;
    }
    if let Some(planet) = args.planet {
        raw.set("planet", planet.name()).map_err(config)?;
    }
    if let Some(w) = args.workers {
        raw.set("workers", w.to_string()).map_err(config)?;
    }
    let catalog = args
        .catalog
        .clone()
        .or_else(|| raw.get("catalog_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os(CATALOG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    if let Some(dir) = catalog {
        raw.set("catalog_dir", dir.display().to_string()).map_err(config)?;
    }
    let cfg = raw.resolve().map_err(config)?;
    let output = run_scenario(&cfg).map_err(config)?;
    let files = write_outputs(&output, &cfg).map_err(|e| (4, e))?;
    println!("{}", files.csv.display());
    if let Some(svg) = files.svg {
        println!("{}", svg.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, e)) => {
            eprintln!("dustlink: {e}");
            ExitCode::from(code)
        }
    }
}
