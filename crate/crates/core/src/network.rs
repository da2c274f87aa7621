//! Feature-vector competition networks.
//!
//! Every node carries a unit-norm content profile. The competition weight
//! between two nodes is their cosine similarity clamped at zero, so nodes
//! posting unrelated content do not compete at all.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};

pub const DEFAULT_FEATURE_DIM: usize = 100;
pub const DEFAULT_N_NODES: usize = 30;
pub const DEFAULT_DENSE_FRACTION: f64 = 0.3;

/// Unit-norm content feature vector of one node.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureProfile {
    node_id: usize,
    components: Vec<f64>,
}

impl FeatureProfile {
    /// Normalizes `components` to unit Euclidean norm.
    pub fn new(node_id: usize, components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::structural("feature profile must have at least one component"));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain(format!("profile {node_id} has non-finite components")));
        }
        let norm = matrix::norm(&components);
        if norm == 0.0 {
            return Err(Error::domain(format!("profile {node_id} has zero norm")));
        }
        let components = components.into_iter().map(|c| c / norm).collect();
        Ok(Self {
            node_id,
            components,
        })
    }

    /// Wraps components that are already unit norm, without rescaling.
    ///
    /// Used when loading stored profiles so that a dump/load cycle is exact.
    pub(crate) fn from_unit(node_id: usize, components: Vec<f64>) -> Result<Self> {
        let norm = matrix::norm(&components);
        if components.is_empty() || !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::structural(format!(
                "stored profile {node_id} is not unit norm (norm {norm})"
            )));
        }
        Ok(Self {
            node_id,
            components,
        })
    }

    pub fn node_id(&self) -> usize {
        self.node_id
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn similarity(&self, other: &FeatureProfile) -> Result<f64> {
        cosine_similarity(&self.components, &other.components)
    }

    pub(crate) fn with_node_id(mut self, node_id: usize) -> Self {
        self.node_id = node_id;
        self
    }
}

/// Cosine of the angle between two vectors, clamped to `[-1, 1]`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::structural(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let aa = matrix::dot(a, a);
    let bb = matrix::dot(b, b);
    if aa == 0.0 || bb == 0.0 {
        return Err(Error::domain("cosine similarity of a zero-norm vector"));
    }
    // sqrt(aa * aa) == aa exactly, so identical inputs give exactly 1.
    let s = matrix::dot(a, b) / (aa * bb).sqrt();
    Ok(s.clamp(-1.0, 1.0))
}

/// Competition weight between two profiles: `max(cos, 0)`.
pub(crate) fn competition_weight(a: &FeatureProfile, b: &FeatureProfile) -> Result<f64> {
    Ok(a.similarity(b)?.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    /// Components uniform on `[-1, 1]`.
    Sparse,
    /// Components uniform on `[0, 1]`.
    Dense,
    /// A fraction of nodes drawn dense, the rest sparse.
    Heterogeneous,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 3] = [
        NetworkKind::Sparse,
        NetworkKind::Dense,
        NetworkKind::Heterogeneous,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Sparse => "sparse",
            NetworkKind::Dense => "dense",
            NetworkKind::Heterogeneous => "heterogeneous",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(NetworkKind::Sparse),
            "dense" => Ok(NetworkKind::Dense),
            "heterogeneous" => Ok(NetworkKind::Heterogeneous),
            other => Err(Error::structural(format!("unknown network kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: NetworkKind,
    pub n_nodes: usize,
    pub feature_dim: usize,
    /// Share of dense-drawn nodes; only read for heterogeneous networks.
    pub dense_fraction: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: NetworkKind, n_nodes: usize, seed: u64) -> Self {
        Self {
            kind,
            n_nodes,
            feature_dim: DEFAULT_FEATURE_DIM,
            dense_fraction: DEFAULT_DENSE_FRACTION,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::structural("a network needs at least 2 nodes"));
        }
        if self.feature_dim < 1 {
            return Err(Error::structural("feature_dim must be at least 1"));
        }
        if self.kind == NetworkKind::Heterogeneous
            && !(self.dense_fraction > 0.0 && self.dense_fraction < 1.0)
        {
            return Err(Error::domain(format!(
                "dense_fraction must lie in (0, 1), got {}",
                self.dense_fraction
            )));
        }
        Ok(())
    }

    /// Number of nodes drawn from the dense distribution.
    pub fn dense_count(&self) -> usize {
        match self.kind {
            NetworkKind::Sparse => 0,
            NetworkKind::Dense => self.n_nodes,
            NetworkKind::Heterogeneous => {
                ((self.dense_fraction * self.n_nodes as f64).round() as usize).clamp(1, self.n_nodes - 1)
            }
        }
    }
}

/// Where a network came from, kept for dumps and result tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub kind: NetworkKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense_fraction: Option<f64>,
}

/// Symmetric, zero-diagonal competition matrix with entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitionNetwork {
    weights: Matrix,
    profiles: Option<Vec<FeatureProfile>>,
    meta: Option<GeneratorMeta>,
}

impl CompetitionNetwork {
    /// Wraps a raw weight matrix after checking the network invariants.
    pub fn from_weights(weights: Matrix) -> Result<Self> {
        validate_weights(&weights)?;
        Ok(Self {
            weights,
            profiles: None,
            meta: None,
        })
    }

    pub(crate) fn from_parts(
        weights: Matrix,
        profiles: Option<Vec<FeatureProfile>>,
        meta: Option<GeneratorMeta>,
    ) -> Self {
        debug_assert!(validate_weights(&weights).is_ok());
        Self {
            weights,
            profiles,
            meta,
        }
    }

    /// Complete graph with every off-diagonal weight equal to `w`.
    pub fn uniform_complete(n_nodes: usize, w: f64) -> Result<Self> {
        Self::from_weights(Matrix::from_fn(n_nodes, |i, j| if i == j { 0.0 } else { w }))
    }

    pub fn n_nodes(&self) -> usize {
        self.weights.dim()
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    pub fn profiles(&self) -> Option<&[FeatureProfile]> {
        self.profiles.as_deref()
    }

    pub fn meta(&self) -> Option<&GeneratorMeta> {
        self.meta.as_ref()
    }

    pub fn feature_dim(&self) -> Option<usize> {
        self.profiles.as_ref().map(|p| p[0].dim())
    }

    pub(crate) fn require_profiles(&self) -> Result<&[FeatureProfile]> {
        self.profiles()
            .ok_or_else(|| Error::structural("operation requires node feature profiles"))
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        self.weights.row_sums()
    }

    /// Relabels nodes so that new node `i` is old node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::structural("not a permutation of the node set"));
        }
        let profiles = self.profiles.as_ref().map(|ps| {
            perm.iter()
                .enumerate()
                .map(|(i, &p)| ps[p].clone().with_node_id(i))
                .collect()
        });
        Ok(Self {
            weights: self.weights.permuted(perm),
            profiles,
            meta: self.meta,
        })
    }
}

fn validate_weights(w: &Matrix) -> Result<()> {
    let n = w.dim();
    if n < 2 {
        return Err(Error::structural("a network needs at least 2 nodes"));
    }
    for i in 0..n {
        if w.get(i, i) != 0.0 {
            return Err(Error::structural(format!("nonzero diagonal at node {i}")));
        }
        for j in 0..n {
            let x = w.get(i, j);
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::domain(format!("weight ({i}, {j}) = {x} outside [0, 1]")));
            }
            if x != w.get(j, i) {
                return Err(Error::structural(format!("weights not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Weight matrix implied by a set of profiles.
pub(crate) fn weights_from_profiles(profiles: &[FeatureProfile]) -> Result<Matrix> {
    let n = profiles.len();
    let mut w = Matrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = competition_weight(&profiles[i], &profiles[j])?;
            w.set(i, j, x);
            w.set(j, i, x);
        }
    }
    Ok(w)
}

/// Builds the clamped cosine-similarity network over `profiles`.
///
/// Profiles are renumbered by position.
pub fn build_network(profiles: Vec<FeatureProfile>) -> Result<CompetitionNetwork> {
    if profiles.len() < 2 {
        return Err(Error::structural("a network needs at least 2 nodes"));
    }
    let dim = profiles[0].dim();
    if let Some(p) = profiles.iter().find(|p| p.dim() != dim) {
        return Err(Error::structural(format!(
            "profile {} has dimension {}, expected {dim}",
            p.node_id(),
            p.dim()
        )));
    }
    let profiles: Vec<_> = profiles
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.with_node_id(i))
        .collect();
    let weights = weights_from_profiles(&profiles)?;
    Ok(CompetitionNetwork::from_parts(weights, Some(profiles), None))
}

/// Draws a random network of the requested kind. Deterministic in `spec.seed`.
pub fn generate(spec: &GeneratorSpec) -> Result<CompetitionNetwork> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dense_count = spec.dense_count();
    let mut profiles = Vec::with_capacity(spec.n_nodes);
    for node in 0..spec.n_nodes {
        let low = if node < dense_count { 0.0 } else { -1.0 };
        // A zero-norm draw has probability ~0; redraw from the same stream.
        let profile = loop {
            let components: Vec<f64> = (0..spec.feature_dim)
                .map(|_| rng.random_range(low..=1.0))
                .collect();
            if let Ok(p) = FeatureProfile::new(node, components) {
                break p;
            }
        };
        profiles.push(profile);
    }
    let mut net = build_network(profiles)?;
    net.meta = Some(GeneratorMeta {
        kind: spec.kind,
        seed: spec.seed,
        dense_fraction: (spec.kind == NetworkKind::Heterogeneous).then_some(spec.dense_fraction),
    });
    Ok(net)
}

/// On-disk form of a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub n_nodes: usize,
    #[serde(default)]
    pub feature_dim: Option<usize>,
    #[serde(default)]
    pub generator: Option<GeneratorMeta>,
    #[serde(default)]
    pub profiles: Option<Vec<Vec<f64>>>,
    pub weights: Matrix,
}

impl NetworkDocument {
    pub fn from_network(net: &CompetitionNetwork) -> Self {
        Self {
            n_nodes: net.n_nodes(),
            feature_dim: net.feature_dim(),
            generator: net.meta,
            profiles: net
                .profiles
                .as_ref()
                .map(|ps| ps.iter().map(|p| p.components.clone()).collect()),
            weights: net.weights.clone(),
        }
    }

    pub fn into_network(self) -> Result<CompetitionNetwork> {
        let n = self.weights.dim();
        if n != self.n_nodes {
            return Err(Error::structural(format!(
                "n_nodes = {} but weight matrix is {n}x{n}",
                self.n_nodes
            )));
        }
        validate_weights(&self.weights)?;
        let profiles = match self.profiles {
            None => None,
            Some(rows) => {
                if rows.len() != n {
                    return Err(Error::structural(format!(
                        "{} profiles for {n} nodes",
                        rows.len()
                    )));
                }
                let profiles = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| FeatureProfile::from_unit(i, c))
                    .collect::<Result<Vec<_>>>()?;
                let dim = profiles[0].dim();
                if profiles.iter().any(|p| p.dim() != dim) || self.feature_dim.is_some_and(|d| d != dim) {
                    return Err(Error::structural("inconsistent profile dimensions"));
                }
                let implied = weights_from_profiles(&profiles)?;
                if implied.sub(&self.weights).max_abs() > 1e-12 {
                    return Err(Error::structural("weights do not match the stored profiles"));
                }
                Some(profiles)
            }
        };
        Ok(CompetitionNetwork {
            weights: self.weights,
            profiles,
            meta: self.generator,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Parse {
            what: "network document".into(),
            source,
        })
    }
}
