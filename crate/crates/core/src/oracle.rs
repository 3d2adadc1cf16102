//! Brute-force reference solvers used to certify the closed forms at small
//! scale. Nothing here calls into the strategy modules.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::steady_state;
use crate::error::OracleError;
use crate::network::{Budgets, Network};

/// Largest grid the oracles will enumerate.
pub const GRID_LIMIT: u128 = 100_000_000;
pub const MAX_GRID_DIM: usize = 5;
pub const MIN_RESOLUTION: f64 = 0.01;
pub const MAX_CCC_NODES: usize = 6;

fn steps(extent: f64, h: f64) -> usize {
    ((extent / h) + 1e-9).floor().max(0.0) as usize
}

/// Number of integer vectors of length `n` with entries in `0..=per` and sum
/// at most `total`.
fn count_bounded(n: usize, per: usize, total: usize) -> u128 {
    // ways[s] = number of prefixes with sum s.
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; total + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for k in 0..=per.min(total - s) {
                next[s + k] = next[s + k].saturating_add(w);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn better(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> bool {
    a.0 > b.0
}

/// Best point of `objective` over the grid `{h * k}` in the simplex
/// `sum x <= budget` (intersected with the box `x <= cap` when given).
pub fn grid_search_allocation<F>(
    objective: F,
    budget: f64,
    cap: Option<f64>,
    n: usize,
    resolution: f64,
) -> Result<(Vec<f64>, f64), OracleError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n == 0 || n > MAX_GRID_DIM {
        return Err(OracleError::InvalidInput(format!(
            "dimension must be in 1..={MAX_GRID_DIM}, got {n}"
        )));
    }
    if !resolution.is_finite() || resolution < MIN_RESOLUTION - 1e-12 {
        return Err(OracleError::InvalidInput(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(OracleError::InvalidInput(format!(
            "invalid budget {budget}"
        )));
    }
    let total = steps(budget, resolution);
    let per = cap.map_or(total, |c| steps(c, resolution).min(total));
    let points = count_bounded(n, per, total);
    if points > GRID_LIMIT {
        return Err(OracleError::GridTooLarge {
            points,
            limit: GRID_LIMIT,
        });
    }

    let best = (0..=per)
        .into_par_iter()
        .map(|first| {
            let mut k = vec![0usize; n];
            k[0] = first;
            let mut best = (f64::NEG_INFINITY, Vec::new());
            enumerate(&mut k, 1, first, per, total, &mut |k| {
                let x: Vec<f64> = k.iter().map(|&v| v as f64 * resolution).collect();
                let v = objective(&x);
                if better(&(v, Vec::new()), &best) {
                    best = (v, x);
                }
            });
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, b| {
            if better(&b, &acc) {
                b
            } else {
                acc
            }
        });
    Ok((best.1, best.0))
}

fn enumerate(
    k: &mut Vec<usize>,
    pos: usize,
    used: usize,
    per: usize,
    total: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if pos == k.len() {
        visit(k);
        return;
    }
    for v in 0..=per.min(total - used) {
        k[pos] = v;
        enumerate(k, pos + 1, used + v, per, total, visit);
    }
    k[pos] = 0;
}

/// Best point of `objective` over the box grid `lower_i + h * k` up to
/// `upper_i`, restricted to points where `feasible` holds.
pub fn grid_search<F, G>(
    lower: &[f64],
    upper: &[f64],
    resolution: f64,
    feasible: G,
    objective: F,
) -> Result<(Vec<f64>, f64), OracleError>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> bool + Sync,
{
    let n = lower.len();
    if n == 0 || n > MAX_GRID_DIM || upper.len() != n {
        return Err(OracleError::InvalidInput("bad grid dimensions".into()));
    }
    if !resolution.is_finite() || resolution < MIN_RESOLUTION - 1e-12 {
        return Err(OracleError::InvalidInput(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let counts: Vec<usize> = lower
        .iter()
        .zip(upper)
        .map(|(l, u)| steps(u - l, resolution) + 1)
        .collect();
    let points = counts
        .iter()
        .fold(1u128, |a, &c| a.saturating_mul(c as u128));
    if points > GRID_LIMIT {
        return Err(OracleError::GridTooLarge {
            points,
            limit: GRID_LIMIT,
        });
    }
    let best = (0..counts[0])
        .into_par_iter()
        .map(|first| {
            let mut best = (f64::NEG_INFINITY, Vec::new());
            let mut idx = vec![0usize; n];
            idx[0] = first;
            let mut x = vec![0.0; n];
            loop {
                for d in 0..n {
                    x[d] = lower[d] + idx[d] as f64 * resolution;
                }
                if feasible(&x) {
                    let v = objective(&x);
                    if v > best.0 {
                        best = (v, x.clone());
                    }
                }
                // Odometer over dimensions 1..n.
                let mut d = n;
                loop {
                    if d == 1 {
                        return best;
                    }
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < counts[d] {
                        break;
                    }
                    idx[d] = 0;
                }
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, b| {
            if b.0 > acc.0 {
                b
            } else {
                acc
            }
        });
    if best.1.is_empty() {
        return Err(OracleError::InvalidInput("no feasible grid point".into()));
    }
    Ok((best.1, best.0))
}

/// Binary investment profile and its opinion sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryProfile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
}

fn subsets_up_to(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let m = items.len();
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() as usize <= k {
            out.push(
                (0..m)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| items[b])
                    .collect(),
            );
        }
    }
    out
}

fn indicator(n: usize, set: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for &i in set {
        v[i] = 1.0;
    }
    v
}

/// Exhaustive backward induction over unit investments under the coupled
/// constraint, for both move orders. Returns `(maxmin, minmax)`.
pub fn enumerate_integer_ccc(
    net: &Network,
    budgets: Budgets,
) -> Result<(BinaryProfile, BinaryProfile), OracleError> {
    let n = net.n();
    if n > MAX_CCC_NODES {
        return Err(OracleError::InstanceTooLarge(format!(
            "{n} nodes, at most {MAX_CCC_NODES} supported"
        )));
    }
    for k in [budgets.k_g, budgets.k_b] {
        if k.fract() != 0.0 || k < 0.0 {
            return Err(OracleError::InvalidInput(format!(
                "budget {k} is not a nonnegative integer"
            )));
        }
    }
    let (kg, kb) = (budgets.k_g as usize, budgets.k_b as usize);
    let all: Vec<usize> = (0..n).collect();
    let eval = |s: &[usize], t: &[usize]| -> Result<BinaryProfile, OracleError> {
        let x = indicator(n, s);
        let y = indicator(n, t);
        let value = steady_state(net, &x, &y)?.v.iter().sum();
        Ok(BinaryProfile { x, y, value })
    };
    let rest =
        |s: &[usize]| -> Vec<usize> { all.iter().copied().filter(|i| !s.contains(i)).collect() };

    let mut maxmin: Option<BinaryProfile> = None;
    for s in subsets_up_to(&all, kg) {
        let mut worst: Option<BinaryProfile> = None;
        for t in subsets_up_to(&rest(&s), kb) {
            let p = eval(&s, &t)?;
            if worst.as_ref().is_none_or(|w| p.value < w.value) {
                worst = Some(p);
            }
        }
        let w = worst.expect("the empty response is always available");
        if maxmin.as_ref().is_none_or(|m| w.value > m.value) {
            maxmin = Some(w);
        }
    }
    let mut minmax: Option<BinaryProfile> = None;
    for t in subsets_up_to(&all, kb) {
        let mut best: Option<BinaryProfile> = None;
        for s in subsets_up_to(&rest(&t), kg) {
            let p = eval(&s, &t)?;
            if best.as_ref().is_none_or(|b| p.value > b.value) {
                best = Some(p);
            }
        }
        let b = best.expect("the empty response is always available");
        if minmax.as_ref().is_none_or(|m| b.value < m.value) {
            minmax = Some(b);
        }
    }
    Ok((
        maxmin.expect("at least one profile"),
        minmax.expect("at least one profile"),
    ))
}

/// `v^<tau>` by direct iteration of the update rule with scalar loops.
pub fn finite_horizon_opinion(net: &Network, x: &[f64], y: &[f64], tau: usize) -> Vec<f64> {
    let n = net.n();
    let edges = net.edges();
    let mut v = net.bias().to_vec();
    for _ in 0..tau {
        let mut next = vec![0.0; n];
        for i in 0..n {
            next[i] = net.self_weight()[i] * net.bias()[i] + net.good_weight()[i] * x[i]
                - net.bad_weight()[i] * y[i];
        }
        for &(i, j, w) in &edges {
            next[i] += w * v[j];
        }
        v = next;
    }
    v
}
