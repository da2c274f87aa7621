//! All-pairs imitation scans and the noise-robustness sweep.
//!
//! Work is spread over the ambient rayon pool. Every random draw takes its
//! seed from [`derive_seed`], and results are collected in a fixed order, so
//! output does not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{fixed_point_reduced, HomogeneousParams};
use crate::error::{Error, Result};
use crate::imitation::{evaluate_pair_with, ImitationOutcome, ImitationSpec};
use crate::network::{generate, CompetitionNetwork, GeneratorSpec, NetworkKind};
use crate::spectral::SpectralSummary;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based sub-seed for the task identified by `path` under `master`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |h, &p| splitmix64(h ^ splitmix64(p.wrapping_add(0x632B_E59B_D9B4_E019))))
}

fn kind_tag(kind: NetworkKind) -> u64 {
    match kind {
        NetworkKind::Sparse => 0,
        NetworkKind::Dense => 1,
        NetworkKind::Heterogeneous => 2,
    }
}

/// Every ordered imitation pair on one network, exact copies.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub kind: Option<NetworkKind>,
    pub seed: Option<u64>,
    pub n_nodes: usize,
    pub lambda_before: f64,
    pub mu_before: Option<f64>,
    /// Node ids by descending eigenvector centrality.
    pub order: Vec<usize>,
    /// Centrality of `order[k]`; non-increasing.
    pub centrality: Vec<f64>,
    /// `outcomes[a][b]`: imitator of rank `a` copying target of rank `b`.
    /// Diagonal entries are `None`.
    pub outcomes: Vec<Vec<Option<ImitationOutcome>>>,
}

impl ScanResult {
    /// Off-diagonal outcomes in (imitator rank, target rank) order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &ImitationOutcome)> {
        self.outcomes.iter().enumerate().flat_map(|(a, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(b, o)| o.as_ref().map(|o| (a, b, o)))
        })
    }

    /// `delta_exact` by (imitator rank, target rank); `None` on the diagonal.
    pub fn delta_matrix(&self) -> Vec<Vec<Option<f64>>> {
        self.outcomes
            .iter()
            .map(|row| row.iter().map(|o| o.as_ref().map(|o| o.delta_exact)).collect())
            .collect()
    }

    /// Mean `delta_exact` over imitators, per target rank.
    pub fn mean_delta_by_target(&self) -> Vec<f64> {
        let n = self.n_nodes;
        (0..n)
            .map(|b| {
                let vals: Vec<f64> = (0..n)
                    .filter_map(|a| self.outcomes[a][b].as_ref().map(|o| o.delta_exact))
                    .collect();
                vals.iter().sum::<f64>() / vals.len() as f64
            })
            .collect()
    }

    /// Share of pairs whose eigenvalue change is negative.
    pub fn negative_fraction(&self) -> f64 {
        let (neg, total) = self
            .pairs()
            .fold((0usize, 0usize), |(neg, t), (_, _, o)| (neg + usize::from(o.delta_exact < 0.0), t + 1));
        neg as f64 / total as f64
    }
}

/// Generates a network and scans it.
pub fn run_scan(spec: &GeneratorSpec) -> Result<ScanResult> {
    let net = generate(spec)?;
    run_scan_on(&net)
}

/// Evaluates all `N(N − 1)` exact imitations on `net`.
pub fn run_scan_on(net: &CompetitionNetwork) -> Result<ScanResult> {
    let n = net.n_nodes();
    let summary = SpectralSummary::of(net)?;
    let order = summary.centrality_order();

    let rows: Vec<Vec<Option<ImitationOutcome>>> = order
        .par_iter()
        .map(|&imitator| {
            order
                .iter()
                .map(|&target| {
                    if imitator == target {
                        return Ok(None);
                    }
                    let spec = ImitationSpec::exact(imitator, target);
                    evaluate_pair_with(net, &summary, &spec, 0).map(Some)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    Ok(ScanResult {
        kind: net.meta().map(|m| m.kind),
        seed: net.meta().map(|m| m.seed),
        n_nodes: n,
        lambda_before: summary.lambda,
        mu_before: summary.mu,
        centrality: order.iter().map(|&i| summary.v_unit[i]).collect(),
        order,
        outcomes: rows,
    })
}

/// Predicted steady attention before and after one imitation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttentionEffect {
    pub imitator_id: usize,
    pub target_id: usize,
    pub delta_lambda: f64,
    pub a_before: f64,
    pub a_after: f64,
    /// `(A_before − A_after) / A_before`.
    pub relative_reduction: f64,
}

/// Converts every pair's post-imitation λ into reduced-model steady attention.
///
/// The "after" value uses μ recomputed on the imitated network.
pub fn summarize_attention_effect(
    scan: &ScanResult,
    params: &HomogeneousParams,
    mu_before: f64,
) -> Result<Vec<AttentionEffect>> {
    let (a_before, _) = fixed_point_reduced(scan.lambda_before, mu_before, params)?;
    scan.pairs()
        .map(|(_, _, o)| {
            // λ = 0 makes μ irrelevant
            let mu_after = o.mu_after.unwrap_or(0.0);
            let (a_after, _) = fixed_point_reduced(o.lambda_after, mu_after, params)?;
            Ok(AttentionEffect {
                imitator_id: o.spec.imitator,
                target_id: o.spec.target,
                delta_lambda: o.delta_exact,
                a_before,
                a_after,
                relative_reduction: (a_before - a_after) / a_before,
            })
        })
        .collect()
}

/// Noise levels `0.0, 0.1, …, 1.0`.
pub fn default_sigma_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kinds: Vec<NetworkKind>,
    pub sigmas: Vec<f64>,
    pub instances: usize,
    pub n_nodes: usize,
    pub feature_dim: usize,
    pub dense_fraction: f64,
    pub master_seed: u64,
    /// Independent noise draws per pair.
    pub repeats: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kinds: NetworkKind::ALL.to_vec(),
            sigmas: default_sigma_grid(),
            instances: 10,
            n_nodes: crate::network::DEFAULT_N_NODES,
            feature_dim: crate::network::DEFAULT_FEATURE_DIM,
            dense_fraction: crate::network::DEFAULT_DENSE_FRACTION,
            master_seed: 0,
            repeats: 1,
        }
    }
}

impl SweepConfig {
    /// Generator spec of instance `instance` of `kind`; identical for every σ.
    pub fn instance_spec(&self, kind: NetworkKind, instance: usize) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            n_nodes: self.n_nodes,
            feature_dim: self.feature_dim,
            dense_fraction: self.dense_fraction,
            seed: derive_seed(self.master_seed, &[kind_tag(kind), instance as u64]),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sigmas.is_empty() || self.kinds.is_empty() {
            return Err(Error::structural("sweep needs at least one kind and one sigma"));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(Error::domain(format!("invalid sigma {s}")));
        }
        if self.instances == 0 || self.repeats == 0 {
            return Err(Error::structural("instances and repeats must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: NetworkKind,
    pub sigma: f64,
    pub instances: usize,
    pub pairs: usize,
    pub successes: usize,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Kind-major, then σ in grid order.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn rates(&self, kind: NetworkKind) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| (r.sigma, r.success_rate))
            .collect()
    }
}

/// Success rate of noisy imitation over all ordered pairs, per kind and σ.
pub fn run_noise_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let n = cfg.n_nodes;
    let mut rows = Vec::with_capacity(cfg.kinds.len() * cfg.sigmas.len());
    for &kind in &cfg.kinds {
        let networks = (0..cfg.instances)
            .into_par_iter()
            .map(|i| {
                let net = generate(&cfg.instance_spec(kind, i))?;
                let summary = SpectralSummary::of(&net)?;
                Ok((net, summary))
            })
            .collect::<Result<Vec<_>>>()?;

        for (sigma_idx, &sigma) in cfg.sigmas.iter().enumerate() {
            let tasks: Vec<(usize, usize)> = (0..cfg.instances)
                .flat_map(|i| (0..n).map(move |imitator| (i, imitator)))
                .collect();
            let successes = tasks
                .par_iter()
                .map(|&(instance, imitator)| {
                    let (net, summary) = &networks[instance];
                    let mut count = 0usize;
                    for target in (0..n).filter(|&t| t != imitator) {
                        for rep in 0..cfg.repeats {
                            let seed = derive_seed(
                                cfg.master_seed,
                                &[
                                    kind_tag(kind),
                                    sigma_idx as u64,
                                    instance as u64,
                                    (imitator * n + target) as u64,
                                    rep as u64,
                                ],
                            );
                            let spec = ImitationSpec {
                                noise_sigma: sigma,
                                ..ImitationSpec::exact(imitator, target)
                            };
                            let out = evaluate_pair_with(net, summary, &spec, seed)?;
                            count += usize::from(out.succeeded());
                        }
                    }
                    Ok(count)
                })
                .collect::<Result<Vec<usize>>>()?
                .into_iter()
                .sum::<usize>();
            let pairs = n * (n - 1) * cfg.instances * cfg.repeats;
            rows.push(SweepRow {
                kind,
                sigma,
                instances: cfg.instances,
                pairs,
                successes,
                success_rate: successes as f64 / pairs as f64,
            });
        }
    }
    Ok(SweepResult { rows })
}

/// Spearman rank correlation, average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs equal-length samples");
    pearson(&ranks(x), &ranks(y))
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && x[idx[end]] == x[idx[start]] {
            end += 1;
        }
        let avg = (start + end - 1) as f64 / 2.0 + 1.0;
        for &k in &idx[start..end] {
            out[k] = avg;
        }
        start = end;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
