//! Command-line front end: argument parsing, configuration, CSV and SVG output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use filippov_core::SimOptions;

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod svg;
pub mod table;

use config::{parse_range, parse_resolution, ConfigFlags};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "filippov",
    version,
    about = "Threshold-harvesting predator-prey Filippov system toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Built-in parameter set (A1 or A2).
    #[arg(long, global = true)]
    pub preset: Option<String>,

    /// JSON file with all twelve parameters.
    #[arg(long, global = true, value_name = "FILE")]
    pub params: Option<PathBuf>,

    /// Override one parameter, e.g. `--set S=0.7`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Output CSV path (stdout if omitted).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Also write an SVG figure next to the CSV output.
    #[arg(long, global = true)]
    pub svg: bool,

    /// Seed for randomized draws (random parameters when no other source is
    /// given, random initial states for `simulate`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl GlobalArgs {
    pub fn flags(&self) -> ConfigFlags {
        ConfigFlags {
            preset: self.preset.clone(),
            params: self.params.clone(),
            set: self.set.clone(),
            out: self.out.clone(),
            svg: self.svg,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 500.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub atol: f64,
    /// Localization tolerance on |x - S|.
    #[arg(long, default_value_t = 1e-10)]
    pub event_tol: f64,
    /// Attractor detection radius.
    #[arg(long, default_value_t = 1e-4)]
    pub radius: f64,
    /// Time to stay within the radius before an attractor counts as reached.
    #[arg(long, default_value_t = 1.0)]
    pub dwell: f64,
    /// Keep integrating to t_end after reaching an attractor.
    #[arg(long)]
    pub no_stop: bool,
}

impl SimArgs {
    pub fn options(&self) -> SimOptions {
        SimOptions {
            t_end: self.t_end,
            rel_tol: self.rtol,
            abs_tol: self.atol,
            event_tol: self.event_tol,
            attractor_radius: self.radius,
            dwell: self.dwell,
            stop_at_attractor: !self.no_stop,
            ..SimOptions::default()
        }
    }
}

type Range = (f64, f64);

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List axial, interior, pseudo- and boundary equilibria.
    Equilibria,
    /// Sliding segment, pseudo-equilibrium and tangent points, optionally over a range of S.
    Sliding {
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        s_range: Option<Range>,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Integrate the Filippov system from one initial state.
    Simulate {
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long)]
        y0: Option<f64>,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Equilibrium structure over the (S, p) plane.
    ScanSp {
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        s_range: Option<Range>,
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        p_range: Option<Range>,
        #[arg(long, value_parser = parse_resolution, default_value = "200x200")]
        resolution: (usize, usize),
    },
    /// One (S, p) scan per refuge value m.
    SweepM {
        #[arg(long, value_delimiter = ',', default_value = "0.4,0.8,0.9")]
        m_values: Vec<f64>,
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        s_range: Option<Range>,
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        p_range: Option<Range>,
        #[arg(long, value_parser = parse_resolution, default_value = "200x200")]
        resolution: (usize, usize),
    },
    /// Basins of attraction on a grid of initial states.
    Basins {
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        x_range: Option<Range>,
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        y_range: Option<Range>,
        #[arg(long, value_parser = parse_resolution, default_value = "400x400")]
        resolution: (usize, usize),
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Thresholds where interior equilibria collide with the manifold.
    Bifurcations {
        #[arg(long, value_parser = parse_range, value_name = "MIN,MAX")]
        s_range: Option<Range>,
    },
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = config::load_config(&cli.global.flags())?;
    commands::dispatch(&cli.command, &cfg)
}
