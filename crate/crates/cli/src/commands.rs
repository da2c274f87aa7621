//! Subcommand bodies. Each writes its file under the configured output
//! directory and returns a report whose `Display` is the stdout summary.

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use attnet::dynamics::{fixed_point_reduced, simulate_full};
use attnet::experiments::{run_noise_sweep, run_scan_on, summarize_attention_effect};
use attnet::network::{generate as generate_network, CompetitionNetwork, NetworkDocument};
use attnet::output::fmt_num;
use attnet::report::{write_scan_csv, write_sweep_csv};
use attnet::spectral::SpectralSummary;

use crate::config::RunConfig;
use crate::CliError;

pub const NETWORK_FILE: &str = "network.json";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SCAN_FILE: &str = "scan.csv";
pub const SWEEP_FILE: &str = "sweep.csv";

fn io_error(path: &Path, source: io::Error) -> attnet::Error {
    attnet::Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_output(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| io_error(&path, e))?;
    let mut out = BufWriter::new(file);
    body(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| io_error(&path, e))?;
    Ok(path)
}

pub fn load_network(path: &Path) -> Result<CompetitionNetwork, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let doc = NetworkDocument::from_json(&text).map_err(|e| match e {
        attnet::Error::Parse { source, .. } => attnet::Error::Parse {
            what: path.display().to_string(),
            source,
        },
        other => other,
    })?;
    Ok(doc.into_network()?)
}

fn mu_or_zero(s: &SpectralSummary) -> f64 {
    // with λ = 0 the fixed point does not depend on μ
    s.mu.unwrap_or(0.0)
}

#[derive(Debug, Clone)]
pub struct GenerateReport {
    pub path: PathBuf,
    pub summary: SpectralSummary,
}

impl fmt::Display for GenerateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.summary;
        writeln!(f, "network: {}", self.path.display())?;
        writeln!(f, "lambda: {}", fmt_num(s.lambda))?;
        match s.mu {
            Some(mu) => writeln!(f, "mu: {}", fmt_num(mu))?,
            None => writeln!(f, "mu: undefined")?,
        }
        writeln!(f, "rank,node,centrality")?;
        for (rank, node) in s.centrality_order().into_iter().enumerate() {
            let flag = if s.is_isolated(node) { ",isolated" } else { "" };
            writeln!(f, "{rank},{node},{}{flag}", fmt_num(s.v_unit[node]))?;
        }
        Ok(())
    }
}

pub fn generate(cfg: &RunConfig) -> Result<GenerateReport, CliError> {
    let net = generate_network(&cfg.generator_spec())?;
    let summary = SpectralSummary::of(&net)?;
    let doc = NetworkDocument::from_network(&net);
    let path = write_output(&cfg.out, NETWORK_FILE, |w| {
        w.write_all(doc.to_json().as_bytes())?;
        writeln!(w)
    })?;
    Ok(GenerateReport { path, summary })
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub path: PathBuf,
    pub steady_reached: bool,
    pub final_time: f64,
    /// Observable `A = Σ v_i a_i` at the last recorded time.
    pub observable: f64,
    pub predicted: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl SimulateReport {
    pub fn relative_gap(&self) -> f64 {
        (self.observable - self.predicted).abs() / self.predicted
    }
}

impl fmt::Display for SimulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trajectory: {}", self.path.display())?;
        writeln!(f, "steady_reached: {}", self.steady_reached)?;
        writeln!(f, "final_time: {}", fmt_num(self.final_time))?;
        writeln!(f, "lambda: {}", fmt_num(self.lambda))?;
        writeln!(f, "mu: {}", fmt_num(self.mu))?;
        writeln!(f, "A_observed: {}", fmt_num(self.observable))?;
        writeln!(f, "A_predicted: {}", fmt_num(self.predicted))?;
        writeln!(f, "relative_gap: {}", fmt_num(self.relative_gap()))
    }
}

pub fn simulate(cfg: &RunConfig, network: &Path) -> Result<SimulateReport, CliError> {
    let net = load_network(network)?;
    let summary = SpectralSummary::of(&net)?;
    let rec = simulate_full(&net, &cfg.model.into(), &cfg.sim)?;
    let mu = mu_or_zero(&summary);
    let (predicted, _) = fixed_point_reduced(summary.lambda, mu, &cfg.model)?;
    let observable = *rec.observable_a.last().expect("a run records at least one sample");
    let path = write_output(&cfg.out, TRAJECTORY_FILE, |w| rec.write_csv(w, true))?;
    Ok(SimulateReport {
        path,
        steady_reached: rec.steady_reached,
        final_time: rec.final_time(),
        observable,
        predicted,
        lambda: summary.lambda,
        mu,
    })
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub path: PathBuf,
    pub pairs: usize,
    pub negative_fraction: f64,
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scan: {}", self.path.display())?;
        writeln!(f, "pairs: {}", self.pairs)?;
        writeln!(f, "negative_fraction: {}", fmt_num(self.negative_fraction))
    }
}

pub fn scan(cfg: &RunConfig) -> Result<ScanReport, CliError> {
    let net = generate_network(&cfg.generator_spec())?;
    let result = run_scan_on(&net)?;
    let attention = summarize_attention_effect(&result, &cfg.model, result.mu_before.unwrap_or(0.0))?;
    let path = write_output(&cfg.out, SCAN_FILE, |w| write_scan_csv(w, &result, &attention))?;
    Ok(ScanReport {
        path,
        pairs: attention.len(),
        negative_fraction: result.negative_fraction(),
    })
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub path: PathBuf,
    pub rows: usize,
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sweep: {}", self.path.display())?;
        writeln!(f, "rows: {}", self.rows)
    }
}

pub fn sweep(cfg: &RunConfig) -> Result<SweepReport, CliError> {
    let result = run_noise_sweep(&cfg.sweep_config())?;
    let path = write_output(&cfg.out, SWEEP_FILE, |w| write_sweep_csv(w, &result))?;
    Ok(SweepReport {
        path,
        rows: result.rows.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralSource {
    Values { lambda: f64, mu: f64 },
    File(PathBuf),
    Generated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    pub lambda: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
}

impl fmt::Display for FixedPointReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda: {}", fmt_num(self.lambda))?;
        writeln!(f, "mu: {}", fmt_num(self.mu))?;
        writeln!(f, "A: {}", fmt_num(self.a))?;
        writeln!(f, "B: {}", fmt_num(self.b))
    }
}

pub fn fixed_point(cfg: &RunConfig, source: &SpectralSource) -> Result<FixedPointReport, CliError> {
    let (lambda, mu) = match source {
        SpectralSource::Values { lambda, mu } => (*lambda, *mu),
        SpectralSource::File(p) => {
            let s = SpectralSummary::of(&load_network(p)?)?;
            (s.lambda, mu_or_zero(&s))
        }
        SpectralSource::Generated => {
            let s = SpectralSummary::of(&generate_network(&cfg.generator_spec())?)?;
            (s.lambda, mu_or_zero(&s))
        }
    };
    let (a, b) = fixed_point_reduced(lambda, mu, &cfg.model)?;
    Ok(FixedPointReport { lambda, mu, a, b })
}
