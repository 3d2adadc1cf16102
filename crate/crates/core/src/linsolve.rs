//! Solves `(I - A) z = b` for a sparse `A` with spectral radius below one.

use nalgebra::DMatrix;

use crate::error::SolveError;
use crate::sparse::CsrMatrix;

/// Largest dimension handled by the dense LU path.
pub const DENSE_LIMIT: usize = 500;
/// Relative residual tolerance: `||(I - A) z - b||_inf <= RESIDUAL_TOL * (1 + ||z||_inf)`.
pub const RESIDUAL_TOL: f64 = 1e-10;

const MAX_FIXED_POINT_ITERS: usize = 20_000;
const MAX_BICGSTAB_ITERS: usize = 5_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SolveMethod {
    DenseLu,
    FixedPoint,
    BiCgStab,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub z: Vec<f64>,
    pub residual: f64,
    pub method: SolveMethod,
}

/// Which operator plays the role of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `A = W`
    Plain,
    /// `A = W^T`
    Transposed,
}

fn apply(w: &CsrMatrix, o: Orientation, x: &[f64], out: &mut [f64]) {
    match o {
        Orientation::Plain => w.mul_vec(x, out),
        Orientation::Transposed => w.mul_vec_transposed(x, out),
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `||(I - A) z - b||_inf`
pub fn residual(w: &CsrMatrix, o: Orientation, z: &[f64], b: &[f64]) -> f64 {
    let mut az = vec![0.0; z.len()];
    apply(w, o, z, &mut az);
    z.iter()
        .zip(&az)
        .zip(b)
        .fold(0.0, |m, ((zi, ai), bi)| m.max((zi - ai - bi).abs()))
}

fn accepted(res: f64, z: &[f64]) -> bool {
    res.is_finite() && res <= RESIDUAL_TOL * (1.0 + inf_norm(z))
}

pub fn solve(w: &CsrMatrix, o: Orientation, b: &[f64]) -> Result<Solution, SolveError> {
    let n = w.n();
    if b.len() != n {
        return Err(SolveError::DimensionMismatch {
            what: "right-hand side",
            got: b.len(),
            expected: n,
        });
    }
    if n == 0 {
        return Ok(Solution {
            z: Vec::new(),
            residual: 0.0,
            method: SolveMethod::DenseLu,
        });
    }
    if n <= DENSE_LIMIT {
        if let Some(z) = dense_lu(w, o, b) {
            let res = residual(w, o, &z, b);
            if accepted(res, &z) {
                return Ok(Solution {
                    z,
                    residual: res,
                    method: SolveMethod::DenseLu,
                });
            }
        }
    }
    let z = fixed_point(w, o, b);
    let res = residual(w, o, &z, b);
    if accepted(res, &z) {
        return Ok(Solution {
            z,
            residual: res,
            method: SolveMethod::FixedPoint,
        });
    }
    let z = bicgstab(w, o, b, z);
    let res = residual(w, o, &z, b);
    if accepted(res, &z) {
        return Ok(Solution {
            z,
            residual: res,
            method: SolveMethod::BiCgStab,
        });
    }
    Err(SolveError::SolveFailure {
        residual: res,
        tolerance: RESIDUAL_TOL * (1.0 + inf_norm(&z)),
    })
}

fn dense_lu(w: &CsrMatrix, o: Orientation, b: &[f64]) -> Option<Vec<f64>> {
    let n = w.n();
    let mut m = DMatrix::<f64>::identity(n, n);
    for (i, j, v) in w.triplets() {
        match o {
            Orientation::Plain => m[(i, j)] -= v,
            Orientation::Transposed => m[(j, i)] -= v,
        }
    }
    let lu = m.lu();
    let z = lu.solve(&nalgebra::DVector::from_column_slice(b))?;
    let mut z: Vec<f64> = z.iter().copied().collect();
    // One step of iterative refinement.
    let mut az = vec![0.0; n];
    apply(w, o, &z, &mut az);
    let r: Vec<f64> = (0..n).map(|i| b[i] - (z[i] - az[i])).collect();
    if let Some(d) = lu.solve(&nalgebra::DVector::from_vec(r)) {
        for (zi, di) in z.iter_mut().zip(d.iter()) {
            *zi += di;
        }
    }
    Some(z)
}

/// Iterates `z <- b + A z`, which contracts whenever `rho(A) < 1`.
fn fixed_point(w: &CsrMatrix, o: Orientation, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut z = b.to_vec();
    let mut az = vec![0.0; n];
    for _ in 0..MAX_FIXED_POINT_ITERS {
        apply(w, o, &z, &mut az);
        let mut diff: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..n {
            let next = b[i] + az[i];
            diff = diff.max((next - z[i]).abs());
            scale = scale.max(next.abs());
            z[i] = next;
        }
        if !diff.is_finite() {
            break;
        }
        if diff <= 1e-14 * (1.0 + scale) {
            break;
        }
    }
    z
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bicgstab(w: &CsrMatrix, o: Orientation, b: &[f64], x0: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    let op = |x: &[f64], out: &mut [f64]| {
        apply(w, o, x, out);
        for i in 0..n {
            out[i] = x[i] - out[i];
        }
    };
    let mut x = if x0.iter().all(|v| v.is_finite()) {
        x0
    } else {
        vec![0.0; n]
    };
    let mut tmp = vec![0.0; n];
    op(&x, &mut tmp);
    let mut r: Vec<f64> = (0..n).map(|i| b[i] - tmp[i]).collect();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    for _ in 0..MAX_BICGSTAB_ITERS {
        if accepted(inf_norm(&r), &x) {
            break;
        }
        let rho_next = dot(&r_hat, &r);
        if rho_next == 0.0 || omega == 0.0 {
            break;
        }
        let beta = (rho_next / rho) * (alpha / omega);
        rho = rho_next;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        op(&p, &mut v);
        let denom = dot(&r_hat, &v);
        if denom == 0.0 {
            break;
        }
        alpha = rho / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        op(&s, &mut t);
        let tt = dot(&t, &t);
        omega = if tt == 0.0 { 0.0 } else { dot(&t, &s) / tt };
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
    }
    x
}
