//! The `heis` command-line driver: regenerates figure geometry as CSV/OBJ
//! and runs Stokes and foliation checks from TOML configs.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Params, RunConfig, Scene, Seed};
pub use crate::error::CliError;

/// What a command wrote, what it prints, and whether it failed after
/// writing its outputs.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<PathBuf>,
    pub failure: Option<CliError>,
}

#[derive(Debug, Parser)]
#[command(name = "heis", version, about = "Heisenberg-group geometry: lifts, foliations, Stokes checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Primary output; other artifacts are written next to it.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Integer or 0x-prefixed hex; wins over HEIS_SEED and the config.
    #[arg(long)]
    pub seed: Option<Seed>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Horizontal lift of a planar curve.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        /// +1 or -1.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i32>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Trace a characteristic leaf of a torus and detect its period.
    Foliate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        torus: TorusArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        start: Option<Vec<f64>>,
        #[arg(long)]
        arclength: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        resolution: Option<Vec<usize>>,
        #[arg(long)]
        close_tolerance: Option<f64>,
    },
    /// Stokes residuals for seeded bump forms on a scene.
    Stokes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scene: Option<Scene>,
        #[arg(long)]
        forms: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        quadrature_tolerance: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        panels: Option<Vec<usize>>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        phi_max: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Triangulated surface plus boundary polylines.
    ExportMesh {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scene: Option<Scene>,
        #[arg(long, value_delimiter = ',')]
        resolution: Option<Vec<usize>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        phi_max: Option<f64>,
        #[command(flatten)]
        torus: TorusArgs,
    },
    /// Quick numerical self-checks.
    Selftest,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
}

fn pair<T: Copy>(name: &str, v: Option<Vec<T>>) -> Result<Option<[T; 2]>, CliError> {
    match v {
        None => Ok(None),
        Some(v) if v.len() == 2 => Ok(Some([v[0], v[1]])),
        Some(v) => Err(CliError::Config(format!("{name} takes two values, got {}", v.len()))),
    }
}

fn config(common: &Common, scene: Option<Scene>, flags: Params) -> Result<RunConfig, CliError> {
    let base = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    base.merged(scene, &flags, common.output.as_deref())
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Lift {
            common,
            curve,
            radius,
            sign,
            samples,
        } => {
            let flags = Params {
                curve,
                radius,
                sign,
                samples,
                ..Params::default()
            };
            commands::lift::run(&config(&common, None, flags)?)
        }
        Command::Foliate {
            common,
            torus,
            start,
            arclength,
            resolution,
            close_tolerance,
        } => {
            let flags = Params {
                r: torus.r,
                big_r: torus.big_r,
                n: torus.n,
                start: pair("start", start)?,
                arclength,
                resolution: pair("resolution", resolution)?,
                close_tolerance,
                ..Params::default()
            };
            commands::foliate::run(&config(&common, None, flags)?)
        }
        Command::Stokes {
            common,
            scene,
            forms,
            tolerance,
            quadrature_tolerance,
            panels,
            h,
            phi_max,
            n,
        } => {
            let flags = Params {
                forms,
                tolerance,
                quadrature_tolerance,
                panels: pair("panels", panels)?,
                h,
                phi_max,
                n,
                ..Params::default()
            };
            let cfg = config(&common, scene, flags)?;
            let seed = cfg.seed(common.seed)?;
            commands::stokes::run(&cfg, seed)
        }
        Command::ExportMesh {
            common,
            scene,
            resolution,
            samples,
            h,
            phi_max,
            torus,
        } => {
            let flags = Params {
                resolution: pair("resolution", resolution)?,
                samples,
                h,
                phi_max,
                r: torus.r,
                big_r: torus.big_r,
                n: torus.n,
                ..Params::default()
            };
            commands::mesh::run(&config(&common, scene, flags)?)
        }
        Command::Selftest => commands::selftest::run(),
    }
}
