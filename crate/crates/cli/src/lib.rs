//! Command-line driver: configuration, subcommands and exit codes.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use attnet::network::NetworkKind;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{Experiment, Overrides, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] attnet::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Core(e) if e.is_io() => EXIT_IO,
            _ => EXIT_CONFIG,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "attnet", version, about = "Attention dynamics on competition networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args)]
pub struct Flags {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_parser = ["sparse", "dense", "heterogeneous"])]
    pub kind: Option<String>,

    #[arg(long, global = true)]
    pub nodes: Option<usize>,

    #[arg(long, global = true)]
    pub sigma_max: Option<f64>,

    #[arg(long, global = true)]
    pub instances: Option<usize>,

    /// Worker threads; 0 picks the machine default.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a network and write its JSON document.
    Generate,
    /// Integrate the full model on a network file.
    Simulate {
        /// Network JSON document; `profiles` may be omitted.
        network: PathBuf,
    },
    /// Evaluate every ordered imitation pair on one generated network.
    Scan,
    /// Success rate of noisy imitation across kinds and noise levels.
    Sweep,
    /// Reduced-model fixed point.
    FixedPoint {
        /// Network file; a generated network is used when absent.
        network: Option<PathBuf>,
        /// Use these spectral values instead of a network.
        #[arg(long, requires = "mu", conflicts_with = "network")]
        lambda: Option<f64>,
        #[arg(long, requires = "lambda")]
        mu: Option<f64>,
    },
}

impl Flags {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            out: self.out.clone(),
            kind: self.kind.as_deref().map(|k| k.parse::<NetworkKind>().expect("clap restricts values")),
            nodes: self.nodes,
            sigma_max: self.sigma_max,
            instances: self.instances,
            threads: self.threads,
        }
    }
}

impl Command {
    pub fn experiment(&self) -> Experiment {
        match self {
            Command::Generate => Experiment::Generate,
            Command::Simulate { .. } => Experiment::Simulate,
            Command::Scan => Experiment::Scan,
            Command::Sweep => Experiment::Sweep,
            Command::FixedPoint { .. } => Experiment::FixedPoint,
        }
    }
}

/// Builds the effective config for a parsed command line.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(cli.flags.config.as_deref())?;
    cfg.apply(&cli.flags.overrides());
    cfg.experiment = cli.command.experiment();
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one command and returns the text report for stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = resolve(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Generate => commands::generate(&cfg).map(|r| r.to_string()),
        Command::Simulate { network } => commands::simulate(&cfg, network).map(|r| r.to_string()),
        Command::Scan => commands::scan(&cfg).map(|r| r.to_string()),
        Command::Sweep => commands::sweep(&cfg).map(|r| r.to_string()),
        Command::FixedPoint { network, lambda, mu } => {
            let source = match (network, lambda, mu) {
                (_, Some(l), Some(m)) => commands::SpectralSource::Values { lambda: *l, mu: *m },
                (Some(p), _, _) => commands::SpectralSource::File(p.clone()),
                _ => commands::SpectralSource::Generated,
            };
            commands::fixed_point(&cfg, &source).map(|r| r.to_string())
        }
    })
}
