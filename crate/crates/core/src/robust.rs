//! Worst-case-optimal good-camp strategy when the extra-network weights are
//! only known to lie in a polytope `E u <= f`, `u >= 0`.
//!
//! The stacked parameter vector holds `(w_ii0, w_ig, w_ib)` of node `i` at
//! indices `3i`, `3i + 1`, `3i + 2`. Parameters that the polytope fixes to a
//! single value are substituted out before any LP is built.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::Allocation;
use crate::error::RobustError;
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::network::{Budgets, Network};

pub const SELF: usize = 0;
pub const GOOD: usize = 1;
pub const BAD: usize = 2;

/// Index of parameter `kind` of node `i` in the stacked vector.
pub fn param_index(i: usize, kind: usize) -> usize {
    3 * i + kind
}

const FEAS_TOL: f64 = 1e-9;

/// One row `sum coeffs * u <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Parameters of the structured box-and-sum polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSum {
    pub hat_w0: Vec<f64>,
    pub hat_wg: Vec<f64>,
    pub hat_wb: Vec<f64>,
    pub eps_l: f64,
    pub eps_o: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyPolytope {
    n: usize,
    rows: Vec<PolyRow>,
    pinned: Vec<Option<f64>>,
    structured: Option<BoxSum>,
}

impl UncertaintyPolytope {
    /// Generic polytope over `3n` parameters. `pinned[k] = Some(v)` fixes
    /// parameter `k` to `v`.
    pub fn generic(
        n: usize,
        rows: Vec<PolyRow>,
        pinned: Vec<Option<f64>>,
    ) -> Result<Self, RobustError> {
        if pinned.len() != 3 * n {
            return Err(RobustError::InvalidInput(format!(
                "expected {} pinned entries, got {}",
                3 * n,
                pinned.len()
            )));
        }
        for (k, r) in rows.iter().enumerate() {
            if !r.rhs.is_finite() || r.coeffs.iter().any(|&(j, v)| j >= 3 * n || !v.is_finite()) {
                return Err(RobustError::InvalidInput(format!(
                    "malformed polytope row {k}"
                )));
            }
        }
        if pinned.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(RobustError::InvalidInput(
                "pinned parameters must be finite and nonnegative".into(),
            ));
        }
        Ok(UncertaintyPolytope {
            n,
            rows,
            pinned,
            structured: None,
        })
    }

    /// Dense `E` (row-major over `3n` columns) and `f`, with every pinned
    /// parameter written as a pair of inequalities.
    pub fn to_dense(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut e = Vec::new();
        let mut f = Vec::new();
        for r in &self.rows {
            let mut row = vec![0.0; 3 * self.n];
            for &(j, v) in &r.coeffs {
                row[j] += v;
            }
            e.push(row);
            f.push(r.rhs);
        }
        for (k, p) in self.pinned.iter().enumerate() {
            if let Some(v) = p {
                let mut row = vec![0.0; 3 * self.n];
                row[k] = 1.0;
                e.push(row.clone());
                f.push(*v);
                row[k] = -1.0;
                e.push(row);
                f.push(-v);
            }
        }
        (e, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[PolyRow] {
        &self.rows
    }

    pub fn pinned(&self) -> &[Option<f64>] {
        &self.pinned
    }

    pub fn structured(&self) -> Option<&BoxSum> {
        self.structured.as_ref()
    }

    /// True when `u` satisfies every constraint within `tol`.
    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        if u.len() != 3 * self.n || u.iter().any(|&v| v < -tol) {
            return false;
        }
        let pinned_ok = self
            .pinned
            .iter()
            .zip(u)
            .all(|(p, &v)| p.is_none_or(|p| (p - v).abs() <= tol));
        pinned_ok
            && self.rows.iter().all(|r| {
                let lhs: f64 = r.coeffs.iter().map(|&(j, v)| v * u[j]).sum();
                lhs <= r.rhs + tol * (1.0 + r.rhs.abs())
            })
    }

    fn reduce(&self) -> Reduced {
        let mut col_of = vec![None; 3 * self.n];
        let mut free = Vec::new();
        for (k, p) in self.pinned.iter().enumerate() {
            if p.is_none() {
                col_of[k] = Some(free.len());
                free.push(k);
            }
        }
        Reduced {
            col_of,
            free,
            pinned: self.pinned.clone(),
        }
    }

    /// Extreme points for random objectives, plus random convex combinations
    /// of them; `count` points in total.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Vec<f64>>, RobustError> {
        let red = self.reduce();
        let base = red.rows(&self.rows)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vertices_wanted = count.div_ceil(2).max(1);
        let mut vertices = Vec::new();
        for _ in 0..vertices_wanted {
            let mut lp = LpProblem::new(red.free.len());
            for c in lp.objective.iter_mut() {
                *c = rng.random::<f64>() * 2.0 - 1.0;
            }
            for (coeffs, rhs) in &base {
                lp.add_le(coeffs.clone(), *rhs);
            }
            let sol = solve_lp(&lp)?;
            match sol.status {
                LpStatus::Optimal => vertices.push(red.expand(&sol.z)),
                LpStatus::Infeasible => return Err(RobustError::EmptyPolytope),
                LpStatus::Unbounded => {
                    return Err(RobustError::InvalidInput("polytope is unbounded".into()))
                }
            }
        }
        let mut out = vertices.clone();
        while out.len() < count {
            let weights: Vec<f64> = (0..vertices.len()).map(|_| rng.random::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            let mut u = vec![0.0; 3 * self.n];
            for (v, w) in vertices.iter().zip(&weights) {
                for (a, b) in u.iter_mut().zip(v) {
                    *a += w / total * b;
                }
            }
            out.push(u);
        }
        out.truncate(count);
        Ok(out)
    }
}

/// Box of relative width `eps_l` around each good and bad weight, plus
/// network-wide sums within relative `eps_o`. The sum rows are only added
/// when `eps_o < eps_l`; otherwise the box already implies them. Self
/// weights are pinned at their given values.
pub fn build_box_sum_polytope(
    hat_w0: &[f64],
    hat_wg: &[f64],
    hat_wb: &[f64],
    eps_l: f64,
    eps_o: f64,
) -> Result<UncertaintyPolytope, RobustError> {
    let n = hat_wg.len();
    if hat_wb.len() != n || hat_w0.len() != n {
        return Err(RobustError::InvalidInput(
            "hat vectors differ in length".into(),
        ));
    }
    if !(eps_l >= 0.0 && eps_o >= 0.0 && eps_l.is_finite() && eps_o.is_finite()) {
        return Err(RobustError::InvalidInput(format!(
            "uncertainty levels must be nonnegative, got eps_l={eps_l}, eps_o={eps_o}"
        )));
    }
    if hat_w0
        .iter()
        .chain(hat_wg)
        .chain(hat_wb)
        .any(|v| !v.is_finite() || *v < 0.0)
    {
        return Err(RobustError::InvalidInput(
            "hat parameters must be finite and nonnegative".into(),
        ));
    }
    let mut pinned = vec![None; 3 * n];
    let mut rows = Vec::new();
    for i in 0..n {
        pinned[param_index(i, SELF)] = Some(hat_w0[i]);
        for (kind, hat) in [(GOOD, hat_wg[i]), (BAD, hat_wb[i])] {
            let k = param_index(i, kind);
            if eps_l == 0.0 || hat == 0.0 {
                pinned[k] = Some(hat);
                continue;
            }
            rows.push(PolyRow {
                coeffs: vec![(k, 1.0)],
                rhs: (1.0 + eps_l) * hat,
            });
            let lo = (1.0 - eps_l) * hat;
            if lo > 0.0 {
                rows.push(PolyRow {
                    coeffs: vec![(k, -1.0)],
                    rhs: -lo,
                });
            }
        }
    }
    if eps_o < eps_l {
        for (kind, hat) in [(GOOD, hat_wg), (BAD, hat_wb)] {
            let total: f64 = hat.iter().sum();
            let coeffs: Vec<(usize, f64)> = (0..n).map(|i| (param_index(i, kind), 1.0)).collect();
            rows.push(PolyRow {
                coeffs: coeffs.clone(),
                rhs: (1.0 + eps_o) * total,
            });
            rows.push(PolyRow {
                coeffs: coeffs.into_iter().map(|(j, v)| (j, -v)).collect(),
                rhs: -(1.0 - eps_o) * total,
            });
        }
    }
    let mut poly = UncertaintyPolytope::generic(n, rows, pinned)?;
    poly.structured = Some(BoxSum {
        hat_w0: hat_w0.to_vec(),
        hat_wg: hat_wg.to_vec(),
        hat_wb: hat_wb.to_vec(),
        eps_l,
        eps_o,
    });
    Ok(poly)
}

/// Box-and-sum polytope around a network's own extra weights.
pub fn box_sum_around(
    net: &Network,
    eps_l: f64,
    eps_o: f64,
) -> Result<UncertaintyPolytope, RobustError> {
    build_box_sum_polytope(
        net.self_weight(),
        net.good_weight(),
        net.bad_weight(),
        eps_l,
        eps_o,
    )
}

/// Polytope restricted to its free parameters.
struct Reduced {
    col_of: Vec<Option<usize>>,
    free: Vec<usize>,
    pinned: Vec<Option<f64>>,
}

type SparseRow = (Vec<(usize, f64)>, f64);

impl Reduced {
    /// Substitutes pinned parameters into `sum coeffs * u <= rhs`. Returns
    /// `Ok(None)` for rows without free entries that hold, and an error for
    /// ones that fail.
    fn substitute(&self, coeffs: &[(usize, f64)], rhs: f64) -> Result<Option<SparseRow>, ()> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        let mut rhs = rhs;
        for &(j, v) in coeffs {
            match (self.col_of[j], self.pinned[j]) {
                (Some(c), _) => match out.iter_mut().find(|(k, _)| *k == c) {
                    Some(e) => e.1 += v,
                    None => out.push((c, v)),
                },
                (None, Some(p)) => rhs -= v * p,
                (None, None) => unreachable!("every parameter is free or pinned"),
            }
        }
        out.retain(|&(_, v)| v != 0.0);
        if out.is_empty() {
            return if rhs >= -FEAS_TOL * (1.0 + rhs.abs()) {
                Ok(None)
            } else {
                Err(())
            };
        }
        Ok(Some((out, rhs)))
    }

    fn rows(&self, rows: &[PolyRow]) -> Result<Vec<SparseRow>, RobustError> {
        let mut out = Vec::new();
        for r in rows {
            match self.substitute(&r.coeffs, r.rhs) {
                Ok(Some(row)) => out.push(row),
                Ok(None) => {}
                Err(()) => return Err(RobustError::EmptyPolytope),
            }
        }
        Ok(out)
    }

    /// Ordering rows `r_i w_ib <= r_i0 w_i0b`; `None` when they cannot hold.
    fn order_rows(&self, r: &[f64], i0: Option<usize>) -> Option<Vec<SparseRow>> {
        let n = r.len();
        let mut out = Vec::new();
        for i in 0..n {
            if Some(i) == i0 {
                continue;
            }
            let mut coeffs = vec![(param_index(i, BAD), r[i])];
            if let Some(k) = i0 {
                coeffs.push((param_index(k, BAD), -r[k]));
            }
            match self.substitute(&coeffs, 0.0) {
                Ok(Some(row)) => out.push(row),
                Ok(None) => {}
                Err(()) => return None,
            }
        }
        Some(out)
    }

    fn expand(&self, z: &[f64]) -> Vec<f64> {
        self.pinned
            .iter()
            .zip(&self.col_of)
            .map(|(p, c)| match (p, c) {
                (Some(v), _) => *v,
                (None, Some(c)) => z[*c].max(0.0),
                (None, None) => 0.0,
            })
            .collect()
    }
}

fn is_feasible(nfree: usize, rows: &[SparseRow]) -> Result<bool, RobustError> {
    if rows.is_empty() {
        return Ok(true);
    }
    let mut lp = LpProblem::new(nfree);
    for (coeffs, rhs) in rows {
        lp.add_le(coeffs.clone(), *rhs);
    }
    Ok(solve_lp(&lp)?.status != LpStatus::Infeasible)
}

/// Candidates `i0` (node index, or `None` for the dummy node) for which some
/// parameter point in the polytope makes `i0` the bad camp's best node.
pub fn feasible_boundary_set(
    r: &[f64],
    poly: &UncertaintyPolytope,
) -> Result<Vec<Option<usize>>, RobustError> {
    if r.len() != poly.n() {
        return Err(RobustError::InvalidInput(
            "influence vector length mismatch".into(),
        ));
    }
    let red = poly.reduce();
    let base = red.rows(&poly.rows)?;
    if !is_feasible(red.free.len(), &base)? {
        return Err(RobustError::EmptyPolytope);
    }
    let cands: Vec<Option<usize>> = (0..poly.n())
        .map(Some)
        .chain(std::iter::once(None))
        .collect();
    let flags: Vec<Result<bool, RobustError>> = cands
        .par_iter()
        .map(|&i0| match red.order_rows(r, i0) {
            None => Ok(false),
            Some(extra) => {
                let mut rows = base.clone();
                rows.extend(extra);
                is_feasible(red.free.len(), &rows)
            }
        })
        .collect();
    let mut out = Vec::new();
    for (c, f) in cands.into_iter().zip(flags) {
        if f? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Dual multipliers of one candidate block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDuals {
    pub i0: Option<usize>,
    /// One per polytope row that keeps a free entry.
    pub alpha: Vec<f64>,
    /// One per ordering row that keeps a free entry.
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustOutcome {
    pub x: Allocation,
    /// Guaranteed opinion sum over the polytope.
    pub worst_case_value: f64,
    pub feasible_set: Vec<Option<usize>>,
    pub duals: Vec<BlockDuals>,
    pub lp_rows: usize,
    pub lp_cols: usize,
    pub pivots: usize,
}

impl RobustOutcome {
    /// Nodes receiving more than `tol` investment.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.x.len()).filter(|&i| self.x[i] > tol).collect()
    }
}

/// Solves the max-rho LP jointly over the allocation and every candidate
/// block's dual multipliers.
pub fn robust_good_strategy(
    net: &Network,
    poly: &UncertaintyPolytope,
    budgets: Budgets,
) -> Result<RobustOutcome, RobustError> {
    let n = net.n();
    if poly.n() != n {
        return Err(RobustError::InvalidInput(
            "polytope size does not match network".into(),
        ));
    }
    let r = net.influence()?.r.clone();
    let v0 = net.bias();
    let k_b = budgets.k_b;
    let nf = feasible_boundary_set(&r, poly)?;
    if nf.is_empty() {
        return Err(RobustError::NoFeasibleBoundary);
    }
    let red = poly.reduce();
    let base = red.rows(&poly.rows)?;

    let mut lp = LpProblem::new(0);
    let rho = lp.add_var(1.0, true);
    let x0 = lp.n_vars();
    for _ in 0..n {
        lp.add_var(0.0, false);
    }
    lp.add_le((0..n).map(|i| (x0 + i, 1.0)).collect(), budgets.k_g);

    struct Block {
        i0: Option<usize>,
        alpha0: usize,
        n_alpha: usize,
        beta0: usize,
        n_beta: usize,
    }
    let mut blocks = Vec::new();
    for &i0 in &nf {
        let order = red
            .order_rows(&r, i0)
            .ok_or(RobustError::NoFeasibleBoundary)?;
        let alpha0 = lp.n_vars();
        for _ in 0..base.len() {
            lp.add_var(0.0, false);
        }
        let beta0 = lp.n_vars();
        for _ in 0..order.len() {
            lp.add_var(0.0, false);
        }

        // rho + f'^T alpha + g'^T beta - K(x) <= K0
        let mut k0 = 0.0;
        let mut row = vec![(rho, 1.0)];
        for (k, (_, f)) in base.iter().enumerate() {
            if *f != 0.0 {
                row.push((alpha0 + k, *f));
            }
        }
        for (l, (_, g)) in order.iter().enumerate() {
            if *g != 0.0 {
                row.push((beta0 + l, *g));
            }
        }
        for i in 0..n {
            if let Some(w0) = red.pinned[param_index(i, SELF)] {
                k0 += r[i] * w0 * v0[i];
            }
            if let Some(wg) = red.pinned[param_index(i, GOOD)] {
                if wg != 0.0 {
                    row.push((x0 + i, -r[i] * wg));
                }
            }
        }
        if let Some(k) = i0 {
            if let Some(wb) = red.pinned[param_index(k, BAD)] {
                k0 -= k_b * r[k] * wb;
            }
        }
        lp.add_le(row, k0);

        // One row per free parameter column.
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); red.free.len()];
        for (k, (coeffs, _)) in base.iter().enumerate() {
            for &(c, v) in coeffs {
                cols[c].push((alpha0 + k, -v));
            }
        }
        for (l, (coeffs, _)) in order.iter().enumerate() {
            for &(c, v) in coeffs {
                cols[c].push((beta0 + l, -v));
            }
        }
        for (c, mut coeffs) in cols.into_iter().enumerate() {
            let p = red.free[c];
            let (i, kind) = (p / 3, p % 3);
            let rhs = match kind {
                SELF => r[i] * v0[i],
                GOOD => {
                    coeffs.push((x0 + i, -r[i]));
                    0.0
                }
                _ if i0 == Some(i) => -k_b * r[i],
                _ => 0.0,
            };
            lp.add_le(coeffs, rhs);
        }
        blocks.push(Block {
            i0,
            alpha0,
            n_alpha: base.len(),
            beta0,
            n_beta: order.len(),
        });
    }

    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(RobustError::LpInfeasible),
        LpStatus::Unbounded => {
            return Err(RobustError::LpUnbounded {
                block: "rho".into(),
            })
        }
    }
    let x: Vec<f64> = (0..n).map(|i| sol.z[x0 + i].max(0.0)).collect();
    let duals = blocks
        .iter()
        .map(|b| BlockDuals {
            i0: b.i0,
            alpha: sol.z[b.alpha0..b.alpha0 + b.n_alpha].to_vec(),
            beta: sol.z[b.beta0..b.beta0 + b.n_beta].to_vec(),
        })
        .collect();
    Ok(RobustOutcome {
        x: Allocation::new(x, budgets.k_g, None),
        worst_case_value: sol.z[rho],
        feasible_set: nf,
        duals,
        lp_rows: lp.rows.len(),
        lp_cols: lp.n_vars(),
        pivots: sol.pivots,
    })
}

/// Opinion sum when the bad camp best-responds to `x` under the true
/// parameters `u`: `sum r w0 v0 + sum r wg x - k_b max(max r wb, 0)`.
pub fn realized_value_params(r: &[f64], bias: &[f64], u: &[f64], x: &[f64], k_b: f64) -> f64 {
    let n = r.len();
    let mut total = 0.0;
    let mut best_bad: f64 = 0.0;
    for i in 0..n {
        total += r[i] * u[param_index(i, SELF)] * bias[i];
        total += r[i] * u[param_index(i, GOOD)] * x[i];
        best_bad = best_bad.max(r[i] * u[param_index(i, BAD)]);
    }
    total - k_b * best_bad
}

/// Realized value against a ground-truth network.
pub fn realized_value(x: &[f64], truth: &Network, k_b: f64) -> Result<f64, RobustError> {
    let r = &truth.influence()?.r;
    let u = stacked_params(truth);
    Ok(realized_value_params(r, truth.bias(), &u, x, k_b))
}

/// Realized value and whether the truth lies in the polytope (the worst-case
/// guarantee only holds when it does).
pub fn realized_value_checked(
    x: &[f64],
    truth: &Network,
    k_b: f64,
    poly: &UncertaintyPolytope,
) -> Result<(f64, bool), RobustError> {
    let v = realized_value(x, truth, k_b)?;
    Ok((v, poly.contains(&stacked_params(truth), 1e-9)))
}

/// `(w_ii0, w_ig, w_ib)` of every node, stacked.
pub fn stacked_params(net: &Network) -> Vec<f64> {
    (0..net.n())
        .flat_map(|i| {
            let e = net.extra(i);
            [e.self_weight, e.good_weight, e.bad_weight]
        })
        .collect()
}
