//! Dense two-phase simplex for small and medium linear programs.
//!
//! Problems are stated as `maximize c^T z` subject to sparse rows
//! `a^T z (<=, =, >=) b` with `z_j >= 0` unless the variable is marked free.

use serde::{Deserialize, Serialize};

use crate::error::LpError;

/// Pivot elements below this magnitude are never used.
pub const PIVOT_TOL: f64 = 1e-10;
/// Reduced costs above this are treated as improving.
const COST_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub free: Vec<bool>,
}

impl LpProblem {
    pub fn new(n_vars: usize) -> Self {
        LpProblem {
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
            free: vec![false; n_vars],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, cost: f64, free: bool) -> usize {
        self.objective.push(cost);
        self.free.push(free);
        self.objective.len() - 1
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, kind: RowKind, rhs: f64) {
        self.rows.push(LpRow { coeffs, kind, rhs });
    }

    pub fn add_le(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.add_row(coeffs, RowKind::Le, rhs);
    }

    pub fn add_ge(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.add_row(coeffs, RowKind::Ge, rhs);
    }

    pub fn add_eq(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.add_row(coeffs, RowKind::Eq, rhs);
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.n_vars();
        if self.free.len() != n {
            return Err(LpError::Malformed(
                "free flags do not match variables".into(),
            ));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("non-finite objective".into()));
        }
        for (k, r) in self.rows.iter().enumerate() {
            if !r.rhs.is_finite() {
                return Err(LpError::Malformed(format!("non-finite rhs in row {k}")));
            }
            for &(j, v) in &r.coeffs {
                if j >= n {
                    return Err(LpError::Malformed(format!(
                        "row {k} references variable {j} of {n}"
                    )));
                }
                if !v.is_finite() {
                    return Err(LpError::Malformed(format!("non-finite entry in row {k}")));
                }
            }
        }
        Ok(())
    }

    /// Largest violation of the rows and sign constraints at `z`.
    pub fn primal_residual(&self, z: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().map(|&(j, v)| v * z[j]).sum();
            let viol = match r.kind {
                RowKind::Le => lhs - r.rhs,
                RowKind::Ge => r.rhs - lhs,
                RowKind::Eq => (lhs - r.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        for (j, &zj) in z.iter().enumerate() {
            if !self.free[j] {
                worst = worst.max(-zj);
            }
        }
        worst
    }

    /// Plain-text dump of the problem for debugging.
    pub fn dump(&self) -> String {
        let mut s = format!("max {:?}\n", self.objective);
        for r in &self.rows {
            let op = match r.kind {
                RowKind::Le => "<=",
                RowKind::Eq => "=",
                RowKind::Ge => ">=",
            };
            s.push_str(&format!("{:?} {op} {}\n", r.coeffs, r.rhs));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub z: Vec<f64>,
    pub value: f64,
    /// One multiplier per row: nonnegative on `<=` rows, nonpositive on `>=`
    /// rows, free on equalities. Empty unless optimal.
    pub duals: Vec<f64>,
    pub pivots: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub duality_gap: f64,
}

struct Tableau {
    /// Row-major `m x (cols + 1)`; the last entry of each row is the rhs.
    t: Vec<Vec<f64>>,
    cols: usize,
    basis: Vec<usize>,
    /// Reduced costs `d_j = c_j - c_B^T B^{-1} A_j` and the current value.
    d: Vec<f64>,
    value: f64,
    barred: Vec<bool>,
    pivots: usize,
    min_pivot: f64,
    max_pivot: f64,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.t[i][self.cols]
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.t[r][q];
        self.min_pivot = self.min_pivot.min(p.abs());
        self.max_pivot = self.max_pivot.max(p.abs());
        let inv = 1.0 / p;
        let row = &mut self.t[r];
        let mut nz = Vec::new();
        for (j, v) in row.iter_mut().enumerate() {
            if *v != 0.0 {
                *v *= inv;
                nz.push(j);
            }
        }
        row[q] = 1.0;
        let prow: Vec<(usize, f64)> = nz.iter().map(|&j| (j, self.t[r][j])).collect();
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][q];
            if f == 0.0 {
                continue;
            }
            let ri = &mut self.t[i];
            for &(j, v) in &prow {
                ri[j] -= f * v;
            }
            ri[q] = 0.0;
        }
        let f = self.d[q];
        if f != 0.0 {
            for &(j, v) in &prow {
                if j < self.cols {
                    self.d[j] -= f * v;
                } else {
                    self.value += f * v;
                }
            }
            self.d[q] = 0.0;
        }
        self.basis[r] = q;
        self.pivots += 1;
    }

    fn set_costs(&mut self, c: &[f64]) {
        self.d = c.to_vec();
        self.value = 0.0;
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb == 0.0 {
                continue;
            }
            for (j, &v) in self.t[i].iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                if j < self.cols {
                    self.d[j] -= cb * v;
                } else {
                    self.value += cb * v;
                }
            }
        }
    }

    fn run(&mut self, max_pivots: usize) -> Result<PhaseEnd, LpError> {
        let mut degenerate = 0usize;
        loop {
            if self.pivots >= max_pivots {
                return Err(self.breakdown());
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut q = None;
            let mut best = COST_TOL;
            for j in 0..self.cols {
                if self.barred[j] || self.d[j] <= COST_TOL {
                    continue;
                }
                if bland {
                    q = Some(j);
                    break;
                }
                if self.d[j] > best {
                    best = self.d[j];
                    q = Some(j);
                }
            }
            let Some(q) = q else {
                return Ok(PhaseEnd::Optimal);
            };
            let mut r: Option<usize> = None;
            let mut ratio = f64::INFINITY;
            for i in 0..self.t.len() {
                let a = self.t[i][q];
                if a <= PIVOT_TOL {
                    continue;
                }
                let v = self.rhs(i).max(0.0) / a;
                let better = match r {
                    None => true,
                    Some(k) => {
                        v < ratio - 1e-12 * (1.0 + ratio.abs())
                            || (v <= ratio + 1e-12 * (1.0 + ratio.abs())
                                && if bland {
                                    self.basis[i] < self.basis[k]
                                } else {
                                    a > self.t[k][q]
                                })
                    }
                };
                if better {
                    r = Some(i);
                    ratio = v;
                }
            }
            let Some(r) = r else {
                return Ok(PhaseEnd::Unbounded);
            };
            if ratio <= 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
    }

    fn breakdown(&self) -> LpError {
        LpError::NumericalBreakdown {
            pivots: self.pivots,
            condition: if self.min_pivot > 0.0 {
                self.max_pivot / self.min_pivot
            } else {
                f64::INFINITY
            },
        }
    }
}

/// Solves `p` to optimality or reports infeasibility / unboundedness.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution, LpError> {
    p.validate()?;
    let n = p.n_vars();
    let m = p.rows.len();

    // Structural columns: one per variable plus a negative copy of each free one.
    let mut col_of = Vec::with_capacity(n);
    let mut neg_col = vec![None; n];
    let mut ncols = 0;
    for j in 0..n {
        col_of.push(ncols);
        ncols += 1;
        if p.free[j] {
            neg_col[j] = Some(ncols);
            ncols += 1;
        }
    }
    let n_struct = ncols;

    // Flip rows with negative rhs so every rhs is nonnegative.
    let flipped: Vec<bool> = p.rows.iter().map(|r| r.rhs < 0.0).collect();
    let kinds: Vec<RowKind> = p
        .rows
        .iter()
        .zip(&flipped)
        .map(|(r, &f)| match (r.kind, f) {
            (RowKind::Le, true) => RowKind::Ge,
            (RowKind::Ge, true) => RowKind::Le,
            (k, _) => k,
        })
        .collect();
    let mut slack_col = vec![None; m];
    for (i, k) in kinds.iter().enumerate() {
        if *k != RowKind::Eq {
            slack_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut art_col = vec![None; m];
    for (i, k) in kinds.iter().enumerate() {
        if *k != RowKind::Le {
            art_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let cols = ncols;

    let mut t = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    for (i, row) in p.rows.iter().enumerate() {
        let sign = if flipped[i] { -1.0 } else { 1.0 };
        let ti = &mut t[i];
        for &(j, v) in &row.coeffs {
            ti[col_of[j]] += sign * v;
            if let Some(c) = neg_col[j] {
                ti[c] -= sign * v;
            }
        }
        ti[cols] = sign * row.rhs;
        if let Some(s) = slack_col[i] {
            ti[s] = if kinds[i] == RowKind::Le { 1.0 } else { -1.0 };
        }
        basis[i] = match art_col[i] {
            Some(a) => {
                ti[a] = 1.0;
                a
            }
            None => slack_col[i].expect("inequality rows have slacks"),
        };
    }
    let mut barred = vec![false; cols];
    let mut tab = Tableau {
        t,
        cols,
        basis,
        d: vec![0.0; cols],
        value: 0.0,
        barred: barred.clone(),
        pivots: 0,
        min_pivot: f64::INFINITY,
        max_pivot: 0.0,
    };
    let max_pivots = 50 * (m + cols) + 1000;
    let scale = 1.0 + p.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);

    let has_art = art_col.iter().any(Option::is_some);
    if has_art {
        let mut c1 = vec![0.0; cols];
        for a in art_col.iter().flatten() {
            c1[*a] = -1.0;
        }
        tab.set_costs(&c1);
        tab.run(max_pivots)?;
        if -tab.value > 1e-9 * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                z: vec![0.0; n],
                value: f64::NAN,
                duals: Vec::new(),
                pivots: tab.pivots,
                primal_residual: f64::NAN,
                dual_residual: f64::NAN,
                duality_gap: f64::NAN,
            });
        }
        // Drive zero-level artificials out of the basis where possible.
        let is_art: Vec<bool> = {
            let mut v = vec![false; cols];
            for a in art_col.iter().flatten() {
                v[*a] = true;
            }
            v
        };
        for i in 0..m {
            if !is_art[tab.basis[i]] {
                continue;
            }
            // Prefer structural columns, then slacks.
            let mut best: Option<(usize, f64)> = None;
            for range in [0..n_struct, n_struct..cols] {
                for j in range {
                    let a = tab.t[i][j].abs();
                    if !is_art[j] && a > PIVOT_TOL && best.is_none_or(|(_, b)| a > b) {
                        best = Some((j, a));
                    }
                }
                if best.is_some() {
                    break;
                }
            }
            if let Some((j, _)) = best {
                tab.pivot(i, j);
            }
        }
        barred = is_art;
        tab.barred = barred.clone();
    }

    let mut c2 = vec![0.0; cols];
    for j in 0..n {
        c2[col_of[j]] = p.objective[j];
        if let Some(c) = neg_col[j] {
            c2[c] = -p.objective[j];
        }
    }
    tab.set_costs(&c2);
    let end = tab.run(max_pivots)?;

    let mut x_cols = vec![0.0; cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        x_cols[b] = tab.rhs(i);
    }
    let z: Vec<f64> = (0..n)
        .map(|j| x_cols[col_of[j]] - neg_col[j].map_or(0.0, |c| x_cols[c]))
        .collect();

    if let PhaseEnd::Unbounded = end {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            z,
            value: f64::INFINITY,
            duals: Vec::new(),
            pivots: tab.pivots,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
            duality_gap: f64::NAN,
        });
    }

    // y_i = c_B^T B^{-1} e_i, read from the column that formed the initial
    // identity in row i (its cost is zero, so y_i = -d).
    let duals: Vec<f64> = (0..m)
        .map(|i| {
            let col = art_col[i]
                .or(slack_col[i])
                .expect("every row has an identity column");
            let y = -tab.d[col];
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    let value: f64 = p.objective.iter().zip(&z).map(|(c, v)| c * v).sum();
    let primal_residual = p.primal_residual(&z);

    // Dual feasibility: A^T y >= c on nonnegative variables, = c on free ones,
    // with sign conditions on y.
    let mut aty = vec![0.0; n];
    for (i, r) in p.rows.iter().enumerate() {
        for &(j, v) in &r.coeffs {
            aty[j] += v * duals[i];
        }
    }
    let mut dual_residual: f64 = 0.0;
    for j in 0..n {
        let gap = aty[j] - p.objective[j];
        dual_residual = dual_residual.max(if p.free[j] { gap.abs() } else { -gap });
    }
    for (i, r) in p.rows.iter().enumerate() {
        let viol = match r.kind {
            RowKind::Le => -duals[i],
            RowKind::Ge => duals[i],
            RowKind::Eq => 0.0,
        };
        dual_residual = dual_residual.max(viol);
    }
    let dual_value: f64 = p.rows.iter().zip(&duals).map(|(r, y)| r.rhs * y).sum();
    let duality_gap = (dual_value - value).abs();

    let obj_scale = 1.0 + p.objective.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if !(primal_residual <= 1e-8 * scale
        && duality_gap <= 1e-7 * (1.0 + value.abs())
        && dual_residual <= 1e-7 * obj_scale)
    {
        return Err(tab.breakdown());
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        z,
        value,
        duals,
        pivots: tab.pivots,
        primal_residual,
        dual_residual,
        duality_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bound() {
        let mut p = LpProblem::new(1);
        p.objective[0] = 1.0;
        p.add_le(vec![(0, 1.0)], 1.0);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded() {
        let mut p = LpProblem::new(1);
        p.objective[0] = 1.0;
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible() {
        let mut p = LpProblem::new(1);
        p.add_le(vec![(0, 1.0)], 1.0);
        p.add_ge(vec![(0, 1.0)], 2.0);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn dual_of_bad_camp_requirement() {
        // max pi * c s.t. pi * s_i <= 1.
        let s = [0.1, 0.4, 0.25];
        let mut p = LpProblem::new(1);
        p.objective[0] = 0.6;
        for si in s {
            p.add_le(vec![(0, si)], 1.0);
        }
        let sol = solve_lp(&p).unwrap();
        assert!((sol.z[0] - 2.5).abs() < 1e-12);
        assert!((sol.value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn equalities_free_vars_and_negative_rhs() {
        // max -x - y with x free, x + y = -1, y >= 0, x >= -3.
        let mut p = LpProblem::new(2);
        p.set_free(0);
        p.objective = vec![-1.0, -1.0];
        p.add_eq(vec![(0, 1.0), (1, 1.0)], -1.0);
        p.add_ge(vec![(0, 1.0)], -3.0);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.duality_gap < 1e-12);
    }

    #[test]
    fn textbook_problem_with_duals() {
        // max 3a + 5b s.t. a <= 4, 2b <= 12, 3a + 2b <= 18.
        let mut p = LpProblem::new(2);
        p.objective = vec![3.0, 5.0];
        p.add_le(vec![(0, 1.0)], 4.0);
        p.add_le(vec![(1, 2.0)], 12.0);
        p.add_le(vec![(0, 3.0), (1, 2.0)], 18.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.value - 36.0).abs() < 1e-10);
        assert!((s.z[0] - 2.0).abs() < 1e-10 && (s.z[1] - 6.0).abs() < 1e-10);
        let want = [0.0, 1.5, 1.0];
        for (a, b) in s.duals.iter().zip(want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook Dantzig rule.
        let mut p = LpProblem::new(4);
        p.objective = vec![0.75, -150.0, 0.02, -6.0];
        p.add_le(vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], 0.0);
        p.add_le(vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], 0.0);
        p.add_le(vec![(2, 1.0)], 1.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.value - 0.05).abs() < 1e-10);
    }

    #[test]
    fn malformed() {
        let mut p = LpProblem::new(1);
        p.add_le(vec![(3, 1.0)], 1.0);
        assert!(matches!(solve_lp(&p), Err(LpError::Malformed(_))));
    }
}
