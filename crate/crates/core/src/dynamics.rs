//! Attention/boredom dynamics on a competition network.
//!
//! Full model, one pair `(a_i, b_i)` per node:
//!
//! ```text
//! da_i/dt = r_i a_i (1 − (b_i + Σ_j w_ij a_j) / K_i)
//! db_i/dt = a_i − ζ_i b_i
//! ```
//!
//! Boredom is the exponentially discounted integral of past attention; the
//! second equation is its differential form. The reduced model tracks the
//! observable `A = vᵀa` (with `1ᵀv = 1`) and its boredom `B`:
//!
//! ```text
//! dA/dt = r A (1 − B/K) − λ r μ A² / K
//! dB/dt = A − ζ B
//! ```
//!
//! whose interior fixed point is `A = Kζ / (1 + ζμλ)`, `B = K / (1 + ζμλ)`.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::CompetitionNetwork;
use crate::ode::Rk4;
use crate::output::fmt_num;
use crate::spectral::SpectralSummary;

/// Attention magnitude treated as blow-up.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Shared parameters used by the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HomogeneousParams {
    pub r: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub zeta: f64,
}

impl Default for HomogeneousParams {
    fn default() -> Self {
        Self {
            r: 1.0,
            k: 1.0,
            zeta: 0.5,
        }
    }
}

impl HomogeneousParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("r", self.r), ("K", self.k), ("zeta", self.zeta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// A parameter that is either shared by all nodes or given per node.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeParam {
    Shared(f64),
    PerNode(Vec<f64>),
}

impl NodeParam {
    fn at(&self, i: usize) -> f64 {
        match self {
            NodeParam::Shared(v) => *v,
            NodeParam::PerNode(vs) => vs[i],
        }
    }

    fn expand(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.at(i)).collect()
    }

    fn validate(&self, name: &str, n: usize) -> Result<()> {
        let values = match self {
            NodeParam::Shared(v) => std::slice::from_ref(v),
            NodeParam::PerNode(vs) => {
                if vs.len() != n {
                    return Err(Error::structural(format!(
                        "{name} has {} entries for {n} nodes",
                        vs.len()
                    )));
                }
                vs.as_slice()
            }
        };
        match values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            Some(v) => Err(Error::domain(format!("{name} must be positive, got {v}"))),
            None => Ok(()),
        }
    }
}

/// Growth rate, carrying capacity and boredom decay for the full model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub r: NodeParam,
    pub k: NodeParam,
    pub zeta: NodeParam,
}

impl ModelParams {
    pub fn homogeneous(r: f64, k: f64, zeta: f64) -> Self {
        Self {
            r: NodeParam::Shared(r),
            k: NodeParam::Shared(k),
            zeta: NodeParam::Shared(zeta),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.r.validate("r", n)?;
        self.k.validate("K", n)?;
        self.zeta.validate("zeta", n)
    }

    /// The shared values, if every parameter is shared.
    pub fn shared(&self) -> Option<HomogeneousParams> {
        match (&self.r, &self.k, &self.zeta) {
            (NodeParam::Shared(r), NodeParam::Shared(k), NodeParam::Shared(zeta)) => {
                Some(HomogeneousParams {
                    r: *r,
                    k: *k,
                    zeta: *zeta,
                })
            }
            _ => None,
        }
    }
}

impl From<HomogeneousParams> for ModelParams {
    fn from(p: HomogeneousParams) -> Self {
        Self::homogeneous(p.r, p.k, p.zeta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Span between steady-state checks.
    pub steady_window: f64,
    /// Largest relative change over one window that still counts as steady.
    pub steady_tol: f64,
    pub a0: f64,
    pub b0: f64,
    /// Spacing of recorded samples; the final state is always recorded.
    pub record_interval: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            t_max: 500.0,
            steady_window: 10.0,
            steady_tol: 1e-8,
            a0: 0.01,
            b0: 0.0,
            record_interval: 0.1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("t_max", self.t_max),
            ("steady_window", self.steady_window),
            ("steady_tol", self.steady_tol),
            ("a0", self.a0),
            ("record_interval", self.record_interval),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.b0 >= 0.0 && self.b0.is_finite()) {
            return Err(Error::domain(format!("b0 must be nonnegative, got {}", self.b0)));
        }
        if self.dt > self.t_max {
            return Err(Error::domain("dt must not exceed t_max"));
        }
        Ok(())
    }

    fn steps(&self, span: f64) -> usize {
        ((span / self.dt).round() as usize).max(1)
    }
}

/// Sampled trajectory of a full or reduced run.
///
/// For reduced runs `attention` and `boredom` have a single column holding
/// `A` and `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    /// One row per sample time.
    pub attention: Vec<Vec<f64>>,
    pub boredom: Vec<Vec<f64>>,
    /// Observable `A = vᵀa` at each sample time.
    pub observable_a: Vec<f64>,
    pub steady_reached: bool,
    pub steady_attention: Option<Vec<f64>>,
    pub steady_boredom: Option<Vec<f64>>,
    /// Observable weights (`1ᵀv = 1`).
    pub weights: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn n_columns(&self) -> usize {
        self.weights.len()
    }

    pub fn final_attention(&self) -> &[f64] {
        self.attention.last().expect("trajectories hold at least one sample")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectories hold at least one sample")
    }

    /// Observable at the declared steady state.
    pub fn steady_observable(&self) -> Option<f64> {
        self.steady_attention.as_ref().map(|a| weighted(&self.weights, a))
    }

    /// Writes `time, a_1..a_N[, b_1..b_N], observable_A` with one header row.
    pub fn write_csv<W: Write>(&self, mut out: W, include_boredom: bool) -> io::Result<()> {
        let n = self.n_columns();
        let mut header = vec!["time".to_string()];
        header.extend((1..=n).map(|i| format!("a_{i}")));
        if include_boredom {
            header.extend((1..=n).map(|i| format!("b_{i}")));
        }
        header.push("observable_A".into());
        writeln!(out, "{}", header.join(","))?;
        for (k, t) in self.times.iter().enumerate() {
            let mut row = vec![fmt_num(*t)];
            row.extend(self.attention[k].iter().map(|x| fmt_num(*x)));
            if include_boredom {
                row.extend(self.boredom[k].iter().map(|x| fmt_num(*x)));
            }
            row.push(fmt_num(self.observable_a[k]));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn weighted(v: &[f64], a: &[f64]) -> f64 {
    v.iter().zip(a).map(|(x, y)| x * y).sum()
}

/// Shared time-stepping loop. `state` is `[a_1..a_m, b_1..b_m]`.
fn integrate<F>(
    mut state: Vec<f64>,
    weights: Vec<f64>,
    cfg: &SimConfig,
    mut rhs: F,
) -> Result<TrajectoryRecord>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let m = weights.len();
    let total_steps = cfg.steps(cfg.t_max);
    let record_every = cfg.steps(cfg.record_interval);
    let window = cfg.steps(cfg.steady_window);

    let mut rec = TrajectoryRecord {
        times: Vec::new(),
        attention: Vec::new(),
        boredom: Vec::new(),
        observable_a: Vec::new(),
        steady_reached: false,
        steady_attention: None,
        steady_boredom: None,
        weights,
    };
    let push = |rec: &mut TrajectoryRecord, t: f64, state: &[f64]| {
        let (a, b) = state.split_at(m);
        rec.times.push(t);
        rec.observable_a.push(weighted(&rec.weights, a));
        rec.attention.push(a.to_vec());
        rec.boredom.push(b.to_vec());
    };

    push(&mut rec, 0.0, &state);
    let mut rk = Rk4::new(state.len());
    let mut snapshot = state[..m].to_vec();
    let mut last_recorded = 0;
    for step in 1..=total_steps {
        rk.step((step - 1) as f64 * cfg.dt, &mut state, cfg.dt, |_, y, dy| rhs(y, dy));
        let t = step as f64 * cfg.dt;
        if let Some(node) = state[..m]
            .iter()
            .position(|a| !a.is_finite() || a.abs() > DIVERGENCE_LIMIT)
        {
            return Err(Error::Divergence { node, time: t });
        }
        if step % record_every == 0 {
            push(&mut rec, t, &state);
            last_recorded = step;
        }
        if step % window == 0 {
            let a = &state[..m];
            // Changes are measured against the largest attention so that
            // nodes decaying towards zero do not block the steady verdict.
            let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs()));
            let change = a
                .iter()
                .zip(&snapshot)
                .fold(0.0f64, |c, (x, y)| c.max((x - y).abs()));
            if scale > 0.0 && change / scale < cfg.steady_tol {
                rec.steady_reached = true;
                rec.steady_attention = Some(a.to_vec());
                rec.steady_boredom = Some(state[m..].to_vec());
                if last_recorded != step {
                    push(&mut rec, t, &state);
                }
                return Ok(rec);
            }
            snapshot.copy_from_slice(a);
        }
    }
    if last_recorded != total_steps {
        push(&mut rec, total_steps as f64 * cfg.dt, &state);
    }
    Ok(rec)
}

/// Integrates the full `2N`-dimensional attention/boredom system.
pub fn simulate_full(
    net: &CompetitionNetwork,
    params: &ModelParams,
    cfg: &SimConfig,
) -> Result<TrajectoryRecord> {
    let n = net.n_nodes();
    params.validate(n)?;
    cfg.validate()?;
    let summary = SpectralSummary::of(net)?;
    let r = params.r.expand(n);
    let k = params.k.expand(n);
    let zeta = params.zeta.expand(n);
    let w = net.weights();

    let mut state = vec![cfg.a0; n];
    state.extend(std::iter::repeat_n(cfg.b0, n));
    integrate(state, summary.v_sum1, cfg, |y, dy| {
        let (a, b) = y.split_at(n);
        let (da, db) = dy.split_at_mut(n);
        for i in 0..n {
            let pressure: f64 = w.row(i).iter().zip(a).map(|(wij, aj)| wij * aj).sum();
            da[i] = r[i] * a[i] * (1.0 - (b[i] + pressure) / k[i]);
            db[i] = a[i] - zeta[i] * b[i];
        }
    })
}

/// Integrates the two-dimensional reduced system for `(A, B)`.
pub fn simulate_reduced(
    lambda: f64,
    mu: f64,
    params: &HomogeneousParams,
    cfg: &SimConfig,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    cfg.validate()?;
    if !(lambda >= 0.0 && lambda.is_finite() && mu.is_finite()) {
        return Err(Error::domain(format!("invalid reduction coefficients lambda = {lambda}, mu = {mu}")));
    }
    let HomogeneousParams { r, k, zeta } = *params;
    let coupling = lambda * r * mu / k;
    integrate(vec![cfg.a0, cfg.b0], vec![1.0], cfg, |y, dy| {
        let (a, b) = (y[0], y[1]);
        dy[0] = r * a * (1.0 - b / k) - coupling * a * a;
        dy[1] = a - zeta * b;
    })
}

/// Closed-form fixed point `(A, B)` of the reduced system.
pub fn fixed_point_reduced(lambda: f64, mu: f64, params: &HomogeneousParams) -> Result<(f64, f64)> {
    params.validate()?;
    let denom = 1.0 + params.zeta * mu * lambda;
    if !(denom > 0.0) {
        return Err(Error::domain(format!(
            "1 + zeta*mu*lambda = {denom} is not positive"
        )));
    }
    Ok((params.k * params.zeta / denom, params.k / denom))
}
