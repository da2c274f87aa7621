//! The imitation intervention and its first-order spectral analysis.
//!
//! An imitator `ι` replaces its profile with (a noisy copy of) the target
//! `τ`'s profile. Only row and column `ι` of `W` change, so the perturbation
//! `P = Ŵ − W` is an arrow matrix with entries `p_j` on row/column `ι`. Its
//! spectrum is `±ψ` with `ψ = ‖p‖` plus `n − 2` zeros, and
//!
//! ```text
//! vᵀPv = 2 v(ι) Σ_{j≠ι} p_j v(j) = ψ ((q_nᵀv)² − (q_1ᵀv)²)
//! ```
//!
//! so the sign of the first-order eigenvalue change is the sign of
//! `Σ_{j≠ι} q_n(j) v(j)` whenever `v(ι) > 0`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::{competition_weight, CompetitionNetwork, FeatureProfile};
use crate::spectral::{self, SpectralSummary, ISOLATION_THRESHOLD};

/// Entries of `P` outside row/column `ι` larger than this break the contract.
pub const OFF_ARROW_TOL: f64 = 1e-15;
/// `|condition_lhs|` at or below this is reported as indeterminate.
pub const CONDITION_TOL: f64 = 1e-12;
/// An eigenvalue change at or below this is not an increase.
pub const SUCCESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImitationSpec {
    pub imitator: usize,
    pub target: usize,
    /// Standard deviation of the per-component Gaussian copy noise.
    pub noise_sigma: f64,
    /// Blend factor on the weight change; 1 is full imitation.
    pub epsilon: f64,
}

impl ImitationSpec {
    /// Exact, full imitation.
    pub fn exact(imitator: usize, target: usize) -> Self {
        Self {
            imitator,
            target,
            noise_sigma: 0.0,
            epsilon: 1.0,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.imitator >= n || self.target >= n {
            return Err(Error::structural(format!(
                "imitator {} / target {} out of range for {n} nodes",
                self.imitator, self.target
            )));
        }
        if self.imitator == self.target {
            return Err(Error::structural("imitator and target must differ"));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::domain(format!("noise_sigma must be >= 0, got {}", self.noise_sigma)));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::domain(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        Ok(())
    }
}

/// Three-valued outcome of the analytic success condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    /// `Some(true)` for yes, `Some(false)` for no.
    pub fn predicts_increase(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::Indeterminate => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn imitated_profile(target: &FeatureProfile, node_id: usize, sigma: f64, seed: u64) -> Result<FeatureProfile> {
    if sigma == 0.0 {
        return FeatureProfile::from_unit(node_id, target.components().to_vec());
    }
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let components = target
            .components()
            .iter()
            .map(|c| c + noise.sample(&mut rng))
            .collect();
        // zero norm has probability ~0; keep drawing from the same stream
        if let Ok(p) = FeatureProfile::new(node_id, components) {
            return Ok(p);
        }
    }
}

/// Network after the imitator adopts the target's profile.
///
/// With `epsilon < 1` the weights are `W + ε(Ŵ − W)` on row/column `ι`; such
/// blended weights correspond to no profile set, so profiles are dropped.
pub fn apply_imitation(net: &CompetitionNetwork, spec: &ImitationSpec, rng_seed: u64) -> Result<CompetitionNetwork> {
    spec.validate(net.n_nodes())?;
    let profiles = net.require_profiles()?;
    let iota = spec.imitator;
    let new_profile = imitated_profile(&profiles[spec.target], iota, spec.noise_sigma, rng_seed)?;

    let mut weights = net.weights().clone();
    for (j, other) in profiles.iter().enumerate() {
        if j == iota {
            continue;
        }
        let full = competition_weight(&new_profile, other)?;
        let w = if spec.epsilon == 1.0 {
            full
        } else {
            let old = weights.get(iota, j);
            old + spec.epsilon * (full - old)
        };
        weights.set(iota, j, w);
        weights.set(j, iota, w);
    }

    let new_profiles = (spec.epsilon == 1.0).then(|| {
        let mut ps = profiles.to_vec();
        ps[iota] = new_profile;
        ps
    });
    Ok(CompetitionNetwork::from_parts(weights, new_profiles, net.meta().copied()))
}

/// Weight change confined to row/column `ι`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub iota: usize,
    /// `p[j] = Ŵ_ιj − W_ιj`; `p[ι]` is always 0.
    pub p: Vec<f64>,
}

impl Perturbation {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Dense `P`.
    pub fn to_matrix(&self) -> Matrix {
        let i = self.iota;
        Matrix::from_fn(self.n(), |r, c| {
            if r == i {
                self.p[c]
            } else if c == i {
                self.p[r]
            } else {
                0.0
            }
        })
    }

    /// `vᵀPv`, evaluated without forming `P`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let cross: f64 = self.p.iter().zip(v).map(|(p, x)| p * x).sum();
        2.0 * v[self.iota] * cross
    }
}

/// `P = after − before`, checked to vanish outside row/column `ι`.
pub fn perturbation_matrix(
    before: &CompetitionNetwork,
    after: &CompetitionNetwork,
    iota: usize,
) -> Result<Perturbation> {
    let n = before.n_nodes();
    if after.n_nodes() != n {
        return Err(Error::structural("networks have different sizes"));
    }
    if iota >= n {
        return Err(Error::structural(format!("imitator {iota} out of range")));
    }
    let diff = after.weights().sub(before.weights());
    for i in (0..n).filter(|&i| i != iota) {
        for j in (0..n).filter(|&j| j != iota) {
            if diff.get(i, j).abs() > OFF_ARROW_TOL {
                return Err(Error::structural(format!(
                    "weights changed at ({i}, {j}), outside row/column {iota}"
                )));
            }
        }
    }
    let mut p = diff.row(iota).to_vec();
    p[iota] = 0.0;
    Ok(Perturbation { iota, p })
}

/// Closed-form eigen-structure of an arrow perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSpectrum {
    pub psi_n: f64,
    pub psi_1: f64,
    /// Unit eigenvectors for `ψ_1` and `ψ_n`; `None` when `p = 0`.
    pub q_1: Option<Vec<f64>>,
    pub q_n: Option<Vec<f64>>,
}

/// Nonzero eigenvalues `±‖p‖` and their normalized eigenvectors.
///
/// `φ(j) = p_j / ψ` for `j ≠ ι` and `φ(ι) = 1`; both have norm `√2`.
pub fn analytic_spectrum(p: &[f64], iota: usize, n: usize) -> Result<AnalyticSpectrum> {
    if n < 2 {
        return Err(Error::structural("perturbation needs at least 2 nodes"));
    }
    if p.len() != n || iota >= n {
        return Err(Error::structural("perturbation vector does not match node count"));
    }
    let psi_n = p
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != iota)
        .map(|(_, x)| x * x)
        .sum::<f64>()
        .sqrt();
    if psi_n == 0.0 {
        return Ok(AnalyticSpectrum {
            psi_n: 0.0,
            psi_1: 0.0,
            q_1: None,
            q_n: None,
        });
    }
    let eigvec = |psi: f64| -> Vec<f64> {
        let mut phi: Vec<f64> = p.iter().map(|x| x / psi).collect();
        phi[iota] = 1.0;
        let norm = crate::matrix::norm(&phi);
        phi.iter().map(|x| x / norm).collect()
    };
    Ok(AnalyticSpectrum {
        psi_n,
        psi_1: -psi_n,
        q_1: Some(eigvec(-psi_n)),
        q_n: Some(eigvec(psi_n)),
    })
}

/// First-order eigenvalue change `ε vᵀPv`.
pub fn predict_delta_lambda(v_unit: &[f64], perturbation: &Perturbation, epsilon: f64) -> f64 {
    epsilon * perturbation.quadratic_form(v_unit)
}

/// `Σ_{j≠ι} q_n(j) v(j)` and its verdict.
pub fn success_condition(q_n: Option<&[f64]>, v_unit: &[f64], iota: usize) -> (f64, Verdict) {
    let Some(q) = q_n else {
        return (0.0, Verdict::Indeterminate);
    };
    let lhs: f64 = q
        .iter()
        .zip(v_unit)
        .enumerate()
        .filter(|&(j, _)| j != iota)
        .map(|(_, (a, b))| a * b)
        .sum();
    let verdict = if v_unit[iota] <= ISOLATION_THRESHOLD || lhs.abs() <= CONDITION_TOL {
        Verdict::Indeterminate
    } else if lhs > 0.0 {
        Verdict::Yes
    } else {
        Verdict::No
    };
    (lhs, verdict)
}

/// Perturbation, its spectrum and the first-order prediction for one event.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationAnalysis {
    pub perturbation: Perturbation,
    pub spectrum: AnalyticSpectrum,
    pub predicted_delta_lambda: f64,
    pub condition_lhs: f64,
    pub condition: Verdict,
}

impl PerturbationAnalysis {
    pub fn new(perturbation: Perturbation, v_unit: &[f64], epsilon: f64) -> Result<Self> {
        let spectrum = analytic_spectrum(&perturbation.p, perturbation.iota, perturbation.n())?;
        let predicted_delta_lambda = predict_delta_lambda(v_unit, &perturbation, epsilon);
        let (condition_lhs, condition) =
            success_condition(spectrum.q_n.as_deref(), v_unit, perturbation.iota);
        Ok(Self {
            perturbation,
            spectrum,
            predicted_delta_lambda,
            condition_lhs,
            condition,
        })
    }
}

/// Exact and predicted effect of one imitation event.
#[derive(Debug, Clone, PartialEq)]
pub struct ImitationOutcome {
    pub spec: ImitationSpec,
    pub lambda_before: f64,
    pub lambda_after: f64,
    pub delta_exact: f64,
    pub delta_predicted: f64,
    pub condition: Verdict,
    pub condition_lhs: f64,
    pub centrality_imitator: f64,
    pub centrality_target: f64,
    /// μ of the post-imitation network; `None` if its λ is zero.
    pub mu_after: Option<f64>,
}

impl ImitationOutcome {
    /// The eigenvalue strictly increased.
    pub fn succeeded(&self) -> bool {
        self.delta_exact > SUCCESS_TOL
    }
}

/// Applies one imitation and compares the exact eigenvalue change with the
/// first-order prediction.
pub fn evaluate_pair(net: &CompetitionNetwork, spec: &ImitationSpec, rng_seed: u64) -> Result<ImitationOutcome> {
    let summary = SpectralSummary::of(net)?;
    evaluate_pair_with(net, &summary, spec, rng_seed)
}

/// As [`evaluate_pair`], reusing a precomputed summary of `net`.
pub fn evaluate_pair_with(
    net: &CompetitionNetwork,
    summary: &SpectralSummary,
    spec: &ImitationSpec,
    rng_seed: u64,
) -> Result<ImitationOutcome> {
    spec.validate(net.n_nodes())?;
    let full_spec = ImitationSpec { epsilon: 1.0, ..*spec };
    let full = apply_imitation(net, &full_spec, rng_seed)?;
    let perturbation = perturbation_matrix(net, &full, spec.imitator)?;
    let after = if spec.epsilon == 1.0 {
        full
    } else {
        apply_imitation(net, spec, rng_seed)?
    };
    let analysis = PerturbationAnalysis::new(perturbation, &summary.v_unit, spec.epsilon)?;

    let pair = spectral::dominant_eigenpair(&after)?;
    let mu_after = if pair.lambda > 0.0 {
        Some(spectral::compute_mu(&after, pair.lambda, &pair.vector)?)
    } else {
        None
    };
    Ok(ImitationOutcome {
        spec: *spec,
        lambda_before: summary.lambda,
        lambda_after: pair.lambda,
        delta_exact: pair.lambda - summary.lambda,
        delta_predicted: analysis.predicted_delta_lambda,
        condition: analysis.condition,
        condition_lhs: analysis.condition_lhs,
        centrality_imitator: summary.v_unit[spec.imitator],
        centrality_target: summary.v_unit[spec.target],
        mu_after,
    })
}
