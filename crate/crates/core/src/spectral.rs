//! Dominant eigenpair of the competition matrix and the reduction
//! coefficients derived from it.

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::network::CompetitionNetwork;

/// Stop when successive Rayleigh quotients differ by less than this.
pub const RAYLEIGH_TOL: f64 = 1e-12;
/// Residual `‖Wv − λv‖` required at convergence, relative to `max(1, λ)`.
pub const RESIDUAL_TOL: f64 = 1e-11;
pub const MAX_ITERATIONS: usize = 100_000;
/// Centrality below this marks a node outside the dominant component.
pub const ISOLATION_THRESHOLD: f64 = 1e-12;

/// Result of a power iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    /// Nonnegative, unit Euclidean norm.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Largest eigenvalue and its nonnegative unit eigenvector.
///
/// Power iteration on `W + sI` with `s` a quarter of the largest degree,
/// started from the all-ones vector. The shift keeps the dominant eigenvalue
/// strictly largest in magnitude when `W` has bipartite structure; it does not
/// change the eigenvectors. All iterates stay nonnegative.
///
/// Disconnected networks are solved per connected component. The component
/// with the largest eigenvalue (the first one on ties) carries the vector and
/// every other node gets centrality exactly zero.
pub fn dominant_eigenpair(net: &CompetitionNetwork) -> Result<Eigenpair> {
    let w = net.weights();
    let components = connected_components(w);
    if components.len() == 1 {
        return power_iteration(w);
    }
    let n = w.dim();
    let mut best: Option<(Eigenpair, &[usize])> = None;
    for comp in components.iter().filter(|c| c.len() > 1) {
        let sub = Matrix::from_fn(comp.len(), |i, j| w.get(comp[i], comp[j]));
        let pair = power_iteration(&sub)?;
        if best.as_ref().is_none_or(|(b, _)| pair.lambda > b.lambda) {
            best = Some((pair, comp));
        }
    }
    let Some((pair, comp)) = best else {
        // no edges at all
        return power_iteration(w);
    };
    let mut vector = vec![0.0; n];
    for (k, &node) in comp.iter().enumerate() {
        vector[node] = pair.vector[k];
    }
    Ok(Eigenpair { vector, ..pair })
}

/// Node sets of the connected components of the positive-weight graph,
/// each sorted, ordered by smallest member.
fn connected_components(w: &Matrix) -> Vec<Vec<usize>> {
    let n = w.dim();
    let mut label = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        label[start] = id;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (j, &x) in w.row(i).iter().enumerate() {
                if x > 0.0 && label[j] == usize::MAX {
                    label[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

pub(crate) fn power_iteration(w: &Matrix) -> Result<Eigenpair> {
    let n = w.dim();
    let max_degree = w.row_sums().into_iter().fold(0.0, f64::max);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    if max_degree == 0.0 {
        return Ok(Eigenpair {
            lambda: 0.0,
            vector: x,
            residual: 0.0,
            iterations: 0,
        });
    }
    let shift = 0.25 * max_degree;

    let mut wx = w.mul_vec(&x);
    let mut rho_prev = matrix::dot(&x, &wx);
    let mut residual = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        for (xi, wxi) in x.iter_mut().zip(&wx) {
            *xi = wxi + shift * *xi;
        }
        let norm = matrix::norm(&x);
        x.iter_mut().for_each(|xi| *xi /= norm);

        w.mul_vec_into(&x, &mut wx);
        let rho = matrix::dot(&x, &wx);
        residual = wx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - rho * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if (rho - rho_prev).abs() < RAYLEIGH_TOL && residual <= RESIDUAL_TOL * rho.max(1.0) {
            return Ok(Eigenpair {
                lambda: rho,
                vector: x,
                residual,
                iterations: iteration,
            });
        }
        rho_prev = rho;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// Eigenvector centrality: the unit-norm Perron vector of `W`.
pub fn eigenvector_centrality(net: &CompetitionNetwork) -> Result<Vec<f64>> {
    Ok(dominant_eigenpair(net)?.vector)
}

/// `μ = vᵀDv / (λ vᵀv)` with `D` the diagonal matrix of weighted degrees.
pub fn compute_mu(net: &CompetitionNetwork, lambda: f64, v: &[f64]) -> Result<f64> {
    if v.len() != net.n_nodes() {
        return Err(Error::structural("eigenvector length does not match the network"));
    }
    if lambda <= 0.0 {
        return Err(Error::domain("mu is undefined for a network with lambda = 0"));
    }
    let degrees = net.degrees();
    let vdv: f64 = v.iter().zip(&degrees).map(|(vi, d)| vi * vi * d).sum();
    Ok(vdv / (lambda * matrix::dot(v, v)))
}

/// Everything the reduction and the imitation analysis need from one network.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub lambda: f64,
    /// Unit Euclidean norm; used by the perturbation analysis.
    pub v_unit: Vec<f64>,
    /// Entries sum to one; used as observable weights.
    pub v_sum1: Vec<f64>,
    /// `None` when `lambda` is zero.
    pub mu: Option<f64>,
    pub degrees: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralSummary {
    pub fn of(net: &CompetitionNetwork) -> Result<Self> {
        let pair = dominant_eigenpair(net)?;
        let mu = if pair.lambda > 0.0 {
            Some(compute_mu(net, pair.lambda, &pair.vector)?)
        } else {
            None
        };
        let total: f64 = pair.vector.iter().sum();
        Ok(Self {
            lambda: pair.lambda,
            v_sum1: pair.vector.iter().map(|x| x / total).collect(),
            v_unit: pair.vector,
            mu,
            degrees: net.degrees(),
            residual: pair.residual,
            iterations: pair.iterations,
        })
    }

    pub fn mu(&self) -> Result<f64> {
        self.mu
            .ok_or_else(|| Error::domain("mu is undefined for a network with lambda = 0"))
    }

    pub fn is_isolated(&self, node: usize) -> bool {
        self.v_unit[node] < ISOLATION_THRESHOLD
    }

    /// Nodes with (numerically) zero centrality.
    pub fn isolated_nodes(&self) -> Vec<usize> {
        (0..self.v_unit.len()).filter(|&i| self.is_isolated(i)).collect()
    }

    /// Node indices sorted by descending centrality, ties by index.
    pub fn centrality_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.v_unit.len()).collect();
        order.sort_by(|&a, &b| self.v_unit[b].total_cmp(&self.v_unit[a]).then(a.cmp(&b)));
        order
    }
}
