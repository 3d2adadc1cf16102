//! Concave influence: investment `x` on a node acts through `x^(1/t)`.

use serde::{Deserialize, Serialize};

use crate::allocation::{check_budget, Allocation, GameOutcome};
use crate::error::{SolveError, StrategyError};
use crate::network::{Budgets, Network};
use crate::strategies::descending_order;

/// Smallest accepted distance of `t` from 1.
pub const MIN_T_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcaveParams {
    t: f64,
}

impl ConcaveParams {
    pub fn new(t: f64) -> Result<Self, StrategyError> {
        if !t.is_finite() || t < 1.0 + MIN_T_MARGIN {
            return Err(StrategyError::ConcavityDomain(t));
        }
        Ok(ConcaveParams { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `t / (t - 1)`
    pub fn exponent(&self) -> f64 {
        self.t / (self.t - 1.0)
    }
}

/// Allocation together with the interior KKT constant `t * gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveSolution {
    pub allocation: Allocation,
    /// `None` when no node is interior.
    pub t_gamma: Option<f64>,
}

fn positives(scores: &[f64]) -> (Vec<usize>, f64) {
    let pos: Vec<usize> = descending_order(scores)
        .into_iter()
        .filter(|&i| scores[i] > 0.0)
        .collect();
    let smax = pos.first().map_or(0.0, |&i| scores[i]);
    (pos, smax)
}

/// `x_i` proportional to `s_i^(t/(t-1))` over the positive scores.
pub fn concave_unbounded(scores: &[f64], budget: f64, t: f64) -> Result<Allocation, StrategyError> {
    Ok(concave_unbounded_detail(scores, budget, t)?.allocation)
}

pub fn concave_unbounded_detail(
    scores: &[f64],
    budget: f64,
    t: f64,
) -> Result<ConcaveSolution, StrategyError> {
    let p = ConcaveParams::new(t)?.exponent();
    check_budget(budget)?;
    let mut x = Allocation::zeros(scores.len(), budget, None);
    let (pos, smax) = positives(scores);
    if pos.is_empty() || budget == 0.0 {
        return Ok(ConcaveSolution {
            allocation: x,
            t_gamma: None,
        });
    }
    // Normalized powers avoid overflow for exponents near 1 from above.
    let u: Vec<f64> = pos.iter().map(|&i| (scores[i] / smax).powf(p)).collect();
    let total: f64 = u.iter().sum();
    for (k, &i) in pos.iter().enumerate() {
        x.amounts[i] = budget * u[k] / total;
    }
    Ok(ConcaveSolution {
        allocation: x,
        t_gamma: Some(smax * (total / budget).powf(1.0 / p)),
    })
}

/// Concave allocation with `0 <= x_i <= cap`.
pub fn concave_bounded(
    scores: &[f64],
    budget: f64,
    t: f64,
    cap: f64,
) -> Result<Allocation, StrategyError> {
    Ok(concave_bounded_detail(scores, budget, t, cap)?.allocation)
}

pub fn concave_bounded_detail(
    scores: &[f64],
    budget: f64,
    t: f64,
    cap: f64,
) -> Result<ConcaveSolution, StrategyError> {
    let p = ConcaveParams::new(t)?.exponent();
    check_budget(budget)?;
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(StrategyError::InvalidInput(format!(
            "cap must be positive, got {cap}"
        )));
    }
    let mut x = Allocation::zeros(scores.len(), budget, Some(cap));
    let (pos, smax) = positives(scores);
    if pos.is_empty() || budget == 0.0 {
        return Ok(ConcaveSolution {
            allocation: x,
            t_gamma: None,
        });
    }
    if pos.len() as f64 * cap <= budget {
        for &i in &pos {
            x.amounts[i] = cap;
        }
        return Ok(ConcaveSolution {
            allocation: x,
            t_gamma: None,
        });
    }

    let u: Vec<f64> = pos.iter().map(|&i| (scores[i] / smax).powf(p)).collect();
    // suffix[m] = sum of u over positions m.. (the interior candidates).
    let mut suffix = vec![0.0; u.len() + 1];
    for k in (0..u.len()).rev() {
        suffix[k] = suffix[k + 1] + u[k];
    }
    for m in 0..pos.len() {
        let rest = budget - m as f64 * cap;
        if rest <= 0.0 {
            break;
        }
        // Interior amount of position k is rest * u[k] / suffix[m]; the
        // largest one sits at position m.
        if rest * u[m] / suffix[m] <= cap * (1.0 + 1e-15) {
            for &i in &pos[..m] {
                x.amounts[i] = cap;
            }
            for k in m..pos.len() {
                x.amounts[pos[k]] = (rest * u[k] / suffix[m]).min(cap);
            }
            let t_gamma = smax * (suffix[m] / rest).powf(1.0 / p);
            return Ok(ConcaveSolution {
                allocation: x,
                t_gamma: Some(t_gamma),
            });
        }
    }
    Ok(bisect_threshold(scores, &pos, budget, p, cap, x))
}

/// Fallback: bisection on `tau = t * gamma` over
/// `sum_i min(cap, (s_i / tau)^p) = budget`.
fn bisect_threshold(
    scores: &[f64],
    pos: &[usize],
    budget: f64,
    p: f64,
    cap: f64,
    mut x: Allocation,
) -> ConcaveSolution {
    let fill = |tau: f64| -> f64 {
        pos.iter()
            .map(|&i| (scores[i] / tau).powf(p).min(cap))
            .sum::<f64>()
    };
    let smax = scores[pos[0]];
    let (mut lo, mut hi) = (smax * 1e-300_f64.max(f64::MIN_POSITIVE), smax);
    while fill(hi) > budget {
        hi *= 2.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if fill(mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    for &i in pos {
        x.amounts[i] = (scores[i] / hi).powf(p).min(cap);
    }
    ConcaveSolution {
        allocation: x,
        t_gamma: Some(hi),
    }
}

/// `sum r w0 v0 + sum s_g x^(1/t) - sum s_b y^(1/t)`
pub fn concave_opinion_sum(net: &Network, x: &[f64], y: &[f64], t: f64) -> Result<f64, SolveError> {
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let e = 1.0 / t;
    let inv: f64 = (0..net.n())
        .map(|i| sg[i] * x[i].powf(e) - sb[i] * y[i].powf(e))
        .sum();
    Ok(net.bias_term()? + inv)
}

/// Both camps' concave-influence strategies; the objectives decouple.
pub fn concave_game(
    net: &Network,
    budgets: Budgets,
    t: f64,
    bounded: bool,
) -> Result<GameOutcome, StrategyError> {
    ConcaveParams::new(t)?;
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let (x, y) = if bounded {
        (
            concave_bounded_detail(&sg, budgets.k_g, t, 1.0)?,
            concave_bounded_detail(&sb, budgets.k_b, t, 1.0)?,
        )
    } else {
        (
            concave_unbounded_detail(&sg, budgets.k_g, t)?,
            concave_unbounded_detail(&sb, budgets.k_b, t)?,
        )
    };
    let value = concave_opinion_sum(net, &x.allocation, &y.allocation, t)?;
    let mut out = GameOutcome::new(x.allocation, y.allocation, value)
        .with_meta("t", t)
        .with_meta("bias_term", net.bias_term()?);
    if let Some(g) = x.t_gamma {
        out = out.with_meta("good_gamma", g / t);
    }
    if let Some(g) = y.t_gamma {
        out = out.with_meta("bad_gamma", g / t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn unbounded_square_root() {
        let x = concave_unbounded(&[2.0, 1.0], 5.0, 2.0).unwrap();
        assert!(close(&x, &[4.0, 1.0], 1e-12));
        assert_eq!(
            concave_unbounded(&[-1.0, 0.0], 5.0, 2.0).unwrap().amounts,
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn large_t_is_nearly_proportional() {
        let s = [3.0, 2.0, 1.0];
        let x = concave_unbounded(&s, 6.0, 1e6).unwrap();
        for (xi, si) in x.iter().zip(s) {
            assert!((xi - si).abs() / si < 1e-4);
        }
    }

    #[test]
    fn domain() {
        assert_eq!(
            concave_unbounded(&[1.0], 1.0, 1.0).unwrap_err(),
            StrategyError::ConcavityDomain(1.0)
        );
        assert!(concave_bounded(&[1.0], 1.0, 0.5, 1.0).is_err());
        assert!(ConcaveParams::new(1.0 + 1e-7).is_err());
    }

    #[test]
    fn bounded_examples() {
        let sol = concave_bounded_detail(&[2.0, 1.0], 1.5, 2.0, 1.0).unwrap();
        assert!(close(&sol.allocation, &[1.0, 0.5], 1e-12));
        assert!((sol.t_gamma.unwrap() - 1.0 / 0.5f64.sqrt()).abs() < 1e-12);
        let x = concave_bounded(&[0.5, 0.4, -0.1], 5.0, 2.0, 1.0).unwrap();
        assert_eq!(x.amounts, vec![1.0, 1.0, 0.0]);
        let s = [0.3, 0.25, 0.2, 0.1];
        let a = concave_bounded(&s, 0.8, 3.0, 1.0).unwrap();
        let b = concave_unbounded(&s, 0.8, 3.0).unwrap();
        assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn bisection_matches_prefix_search() {
        let scores = [5.0, 4.0, 1.0, 0.5, -1.0];
        let (pos, _) = positives(&scores);
        let p = 2.0;
        let direct = concave_bounded_detail(&scores, 2.2, 2.0, 1.0).unwrap();
        let fb = bisect_threshold(
            &scores,
            &pos,
            2.2,
            p,
            1.0,
            Allocation::zeros(5, 2.2, Some(1.0)),
        );
        assert!(close(&direct.allocation, &fb.allocation, 1e-9));
    }
}
