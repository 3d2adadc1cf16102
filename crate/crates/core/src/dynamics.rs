//! Steady-state opinions, the influence vector, and finite-horizon iteration.

use std::io::Write;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::linsolve::{self, Orientation, SolveMethod};
use crate::network::Network;

/// Default tolerance for reporting trajectory convergence.
pub const TRAJECTORY_TOL: f64 = 1e-8;

/// `r` solving `(I - w^T) r = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceVector {
    pub r: Vec<f64>,
    pub residual: f64,
    pub method: SolveMethod,
}

impl Deref for InfluenceVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpinionState {
    pub v: Vec<f64>,
    pub tau: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `states[k]` holds `v^<k>`, starting from the biases.
    pub states: Vec<OpinionState>,
    /// First step whose increment fell below the tolerance.
    pub converged_at: Option<usize>,
}

impl Trajectory {
    pub fn last(&self) -> &OpinionState {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }

    /// Writes `tau,node,opinion` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tau,node,opinion")?;
        for s in &self.states {
            for (i, v) in s.v.iter().enumerate() {
                writeln!(out, "{},{},{}", s.tau, i, v)?;
            }
        }
        Ok(())
    }
}

/// Solves for `r` directly, bypassing the per-network cache.
pub fn compute_influence(net: &Network) -> Result<InfluenceVector, SolveError> {
    let ones = vec![1.0; net.n()];
    let s = linsolve::solve(net.w(), Orientation::Transposed, &ones)?;
    Ok(InfluenceVector {
        r: s.z,
        residual: s.residual,
        method: s.method,
    })
}

/// The network's influence vector (cached after the first call).
pub fn influence_vector(net: &Network) -> Result<InfluenceVector, SolveError> {
    net.influence().cloned()
}

fn check_len(what: &'static str, v: &[f64], n: usize) -> Result<(), SolveError> {
    if v.len() != n {
        return Err(SolveError::DimensionMismatch {
            what,
            got: v.len(),
            expected: n,
        });
    }
    Ok(())
}

/// `w0 * v0 + wg * x - wb * y`
fn forcing(net: &Network, x: &[f64], y: &[f64]) -> Result<Vec<f64>, SolveError> {
    let n = net.n();
    check_len("x", x, n)?;
    check_len("y", y, n)?;
    let (w0, wg, wb, v0) = (
        net.self_weight(),
        net.good_weight(),
        net.bad_weight(),
        net.bias(),
    );
    Ok((0..n)
        .map(|i| w0[i] * v0[i] + wg[i] * x[i] - wb[i] * y[i])
        .collect())
}

/// Limit opinions `v = (I - w)^{-1} (w0 * v0 + wg * x - wb * y)`.
pub fn steady_state(net: &Network, x: &[f64], y: &[f64]) -> Result<OpinionState, SolveError> {
    let b = forcing(net, x, y)?;
    let s = linsolve::solve(net.w(), Orientation::Plain, &b)?;
    Ok(OpinionState { v: s.z, tau: 0 })
}

/// Runs `v <- w v + w0 * v0 + wg * x - wb * y` from `v = v0` for at most
/// `tau_max` steps, stopping once the sup-norm increment is at most `tol`.
pub fn iterate_dynamics(
    net: &Network,
    x: &[f64],
    y: &[f64],
    tau_max: usize,
    tol: f64,
) -> Result<Trajectory, SolveError> {
    let b = forcing(net, x, y)?;
    let n = net.n();
    let mut v = net.bias().to_vec();
    let mut states = vec![OpinionState {
        v: v.clone(),
        tau: 0,
    }];
    let mut wv = vec![0.0; n];
    let mut converged_at = None;
    for tau in 1..=tau_max {
        net.w().mul_vec(&v, &mut wv);
        let mut diff: f64 = 0.0;
        for i in 0..n {
            let next = wv[i] + b[i];
            diff = diff.max((next - v[i]).abs());
            v[i] = next;
        }
        states.push(OpinionState { v: v.clone(), tau });
        if diff <= tol {
            converged_at = Some(tau);
            break;
        }
    }
    Ok(Trajectory {
        states,
        converged_at,
    })
}

/// `sum_i v_i` in closed form: `sum r w0 v0 + sum r wg x - sum r wb y`.
pub fn opinion_sum(net: &Network, x: &[f64], y: &[f64]) -> Result<f64, SolveError> {
    let n = net.n();
    check_len("x", x, n)?;
    check_len("y", y, n)?;
    let r = net.influence()?;
    let (w0, wg, wb, v0) = (
        net.self_weight(),
        net.good_weight(),
        net.bad_weight(),
        net.bias(),
    );
    Ok((0..n)
        .map(|i| r[i] * (w0[i] * v0[i] + wg[i] * x[i] - wb[i] * y[i]))
        .sum())
}
