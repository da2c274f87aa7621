//! Run configuration: one TOML document, every key optional.
//!
//! Built-in defaults:
//!
//! | key                    | default         |
//! |------------------------|-----------------|
//! | `seed`                 | 0               |
//! | `out`                  | `"out"`         |
//! | `threads`              | 0 (auto)        |
//! | `network.kind`         | `"sparse"`      |
//! | `network.nodes`        | 30              |
//! | `network.feature_dim`  | 100             |
//! | `network.dense_fraction` | 0.3           |
//! | `model.r`              | 1.0             |
//! | `model.K`              | 1.0             |
//! | `model.zeta`           | 0.5             |
//! | `sim.dt`               | 0.01            |
//! | `sim.t_max`            | 500.0           |
//! | `sim.steady_window`    | 10.0            |
//! | `sim.steady_tol`       | 1e-8            |
//! | `sim.a0`               | 0.01            |
//! | `sim.b0`               | 0.0             |
//! | `sim.record_interval`  | 0.1             |
//! | `sweep.kinds`          | all three kinds |
//! | `sweep.sigma_max`      | 1.0             |
//! | `sweep.sigma_step`     | 0.1             |
//! | `sweep.instances`      | 10              |
//! | `sweep.repeats`        | 1               |
//!
//! Command-line flags override file values, which override the defaults.

use std::path::{Path, PathBuf};

use attnet::dynamics::{HomogeneousParams, SimConfig};
use attnet::experiments::SweepConfig;
use attnet::network::{
    GeneratorSpec, NetworkKind, DEFAULT_DENSE_FRACTION, DEFAULT_FEATURE_DIM, DEFAULT_N_NODES,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Generate,
    Simulate,
    Scan,
    Sweep,
    FixedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub kind: NetworkKind,
    pub nodes: usize,
    pub feature_dim: usize,
    pub dense_fraction: f64,
}

impl Default for NetworkSection {
    fn default() -> Self {
        Self {
            kind: NetworkKind::Sparse,
            nodes: DEFAULT_N_NODES,
            feature_dim: DEFAULT_FEATURE_DIM,
            dense_fraction: DEFAULT_DENSE_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub kinds: Vec<NetworkKind>,
    pub sigma_max: f64,
    pub sigma_step: f64,
    pub instances: usize,
    pub repeats: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        let base = SweepConfig::default();
        Self {
            kinds: base.kinds,
            sigma_max: 1.0,
            sigma_step: 0.1,
            instances: base.instances,
            repeats: base.repeats,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Set from the subcommand; kept so a file fully describes a run.
    pub experiment: Experiment,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads for experiments; 0 picks the machine default.
    pub threads: usize,
    pub network: NetworkSection,
    pub model: HomogeneousParams,
    pub sim: SimConfig,
    pub sweep: SweepSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Scan,
            seed: 0,
            out: PathBuf::from("out"),
            threads: 0,
            network: NetworkSection::default(),
            model: HomogeneousParams::default(),
            sim: SimConfig::default(),
            sweep: SweepSection::default(),
        }
    }
}

/// Values given on the command line; `None` leaves the config untouched.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub kind: Option<NetworkKind>,
    pub nodes: Option<usize>,
    pub sigma_max: Option<f64>,
    pub instances: Option<usize>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn emit(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads `path` if given, otherwise starts from the defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| attnet::Error::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                Self::parse(&text).map_err(|e| match e {
                    CliError::Config(msg) => CliError::Config(format!("{}: {msg}", p.display())),
                    other => other,
                })
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
        if let Some(v) = o.kind {
            self.network.kind = v;
            self.sweep.kinds = vec![v];
        }
        if let Some(v) = o.nodes {
            self.network.nodes = v;
        }
        if let Some(v) = o.sigma_max {
            self.sweep.sigma_max = v;
        }
        if let Some(v) = o.instances {
            self.sweep.instances = v;
        }
        if let Some(v) = o.threads {
            self.threads = v;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.generator_spec().validate()?;
        self.model.validate()?;
        self.sim.validate()?;
        let s = &self.sweep;
        if !(s.sigma_max >= 0.0 && s.sigma_max.is_finite()) {
            return Err(CliError::Config(format!("sweep.sigma_max must be nonnegative, got {}", s.sigma_max)));
        }
        if !(s.sigma_step > 0.0 && s.sigma_step.is_finite()) {
            return Err(CliError::Config(format!("sweep.sigma_step must be positive, got {}", s.sigma_step)));
        }
        if s.kinds.is_empty() || s.instances == 0 || s.repeats == 0 {
            return Err(CliError::Config("sweep needs kinds, instances and repeats".into()));
        }
        Ok(())
    }

    pub fn generator_spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            kind: self.network.kind,
            n_nodes: self.network.nodes,
            feature_dim: self.network.feature_dim,
            dense_fraction: self.network.dense_fraction,
            seed: self.seed,
        }
    }

    /// Evenly spaced σ from 0 to `sigma_max`, step as close to `sigma_step` as fits.
    pub fn sigma_grid(&self) -> Vec<f64> {
        let steps = (self.sweep.sigma_max / self.sweep.sigma_step).round() as usize;
        if steps == 0 {
            return vec![0.0];
        }
        (0..=steps)
            .map(|k| k as f64 * self.sweep.sigma_max / steps as f64)
            .collect()
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            kinds: self.sweep.kinds.clone(),
            sigmas: self.sigma_grid(),
            instances: self.sweep.instances,
            n_nodes: self.network.nodes,
            feature_dim: self.network.feature_dim,
            dense_fraction: self.network.dense_fraction,
            master_seed: self.seed,
            repeats: self.sweep.repeats,
        }
    }
}
