//! Settings where the good camp plays against a bad camp that must bring the
//! opinion sum down to zero: the good camp maximizes the bad camp's required
//! investment, or its required deviation from a desired investment.

use serde::{Deserialize, Serialize};

use crate::allocation::{check_budget, Allocation, GameOutcome};
use crate::dynamics::opinion_sum;
use crate::error::StrategyError;
use crate::network::Network;
use crate::strategies::basic::{optimal_bounded, optimal_unbounded};
use crate::strategies::{descending_order, dot};

fn max_score(s: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in s.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best
}

/// Unbounded investments. The bad camp puts its minimal required total on
/// its best node.
pub fn adversary_unbounded(net: &Network, k_g: f64) -> Result<GameOutcome, StrategyError> {
    check_budget(k_g)?;
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let bias = net.bias_term()?;
    let x = optimal_unbounded(&sg, k_g)?;
    let max_g = max_score(&sg).map_or(0.0, |(_, v)| v.max(0.0));
    let numerator = k_g * max_g + bias;
    let mut y = Allocation::zeros(net.n(), 0.0, None);
    let mut dual = None;
    if numerator > 0.0 {
        match max_score(&sb) {
            Some((j, m)) if m > 0.0 => {
                let total = numerator / m;
                y.amounts[j] = total;
                y.budget = total;
                dual = Some(1.0 / m);
            }
            _ => {
                return Err(StrategyError::AdversaryInfeasible {
                    shortfall: numerator,
                })
            }
        }
    }
    let value = opinion_sum(net, &x, &y)?;
    let mut out = GameOutcome::new(x, y.clone(), value)
        .with_meta("bad_total", y.total())
        .with_meta("target", numerator)
        .with_meta("bias_term", bias);
    if let Some(pi) = dual {
        out = out.with_meta("dual_pi", pi);
    }
    Ok(out)
}

/// At most one unit per node for both camps. The bad camp fills its best
/// nodes until the opinion sum reaches zero.
pub fn adversary_bounded(net: &Network, k_g: f64) -> Result<GameOutcome, StrategyError> {
    check_budget(k_g)?;
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let bias = net.bias_term()?;
    let x = optimal_bounded(&sg, k_g, 1.0)?;
    let target = bias + dot(&sg, &x);
    let y = fill_to_target(&sb, target)?;
    let value = opinion_sum(net, &x, &y)?;
    let total = y.total();
    Ok(GameOutcome::new(x, y, value)
        .with_meta("bad_total", total)
        .with_meta("target", target)
        .with_meta("bias_term", bias))
}

/// Greedy unit fill in descending score order until `scores . y >= target`,
/// with an exact fractional amount on the last node.
pub(crate) fn fill_to_target(scores: &[f64], target: f64) -> Result<Allocation, StrategyError> {
    let mut y = vec![0.0; scores.len()];
    if target <= 0.0 {
        return Ok(Allocation::new(y, 0.0, Some(1.0)));
    }
    let mut acc = 0.0;
    let mut last = None;
    for i in descending_order(scores) {
        let s = scores[i];
        if s <= 0.0 {
            break;
        }
        last = Some(i);
        if acc + s >= target {
            y[i] = ((target - acc) / s).min(1.0);
            acc = target;
            break;
        }
        y[i] = 1.0;
        acc += s;
    }
    if acc < target {
        return Err(StrategyError::AdversaryInfeasible {
            shortfall: target - acc,
        });
    }
    if let Some(i) = last {
        // Rounding may leave the product a hair below the target.
        while dot(scores, &y) < target && y[i] < 1.0 {
            y[i] = y[i].next_up();
        }
    }
    let total = y.iter().sum();
    Ok(Allocation::new(y, total, Some(1.0)))
}

/// Desired investments of the two camps in the deviation setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesiredInvestment {
    pub x_bar: Vec<f64>,
    pub y_bar: Vec<f64>,
}

impl DesiredInvestment {
    pub fn new(x_bar: Vec<f64>, y_bar: Vec<f64>) -> Result<Self, StrategyError> {
        if x_bar.len() != y_bar.len() {
            return Err(StrategyError::InvalidInput(
                "desired investments have different lengths".into(),
            ));
        }
        if x_bar
            .iter()
            .chain(&y_bar)
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(StrategyError::InvalidInput(
                "desired investments must be finite and nonnegative".into(),
            ));
        }
        Ok(DesiredInvestment { x_bar, y_bar })
    }

    pub fn zeros(n: usize) -> Self {
        DesiredInvestment {
            x_bar: vec![0.0; n],
            y_bar: vec![0.0; n],
        }
    }
}

/// Deviation allocation and the multiplier `gamma` of the ball constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationSolution {
    pub x: Vec<f64>,
    /// `None` when no positive root exists and the degenerate branch was used.
    pub gamma: Option<f64>,
}

/// Maximizes `scores . x` over `sum (x_i - x_bar_i)^2 <= k_g`, `x >= 0`.
pub fn deviation_from_scores(
    scores: &[f64],
    x_bar: &[f64],
    k_g: f64,
) -> Result<DeviationSolution, StrategyError> {
    if scores.len() != x_bar.len() {
        return Err(StrategyError::InvalidInput(
            "scores and x_bar differ in length".into(),
        ));
    }
    if !(k_g > 0.0 && k_g.is_finite()) {
        return Err(StrategyError::InvalidInput(format!(
            "deviation budget must be positive, got {k_g}"
        )));
    }
    let any_positive = scores.iter().any(|&s| s > 0.0);
    let neg_mass: f64 = scores
        .iter()
        .zip(x_bar)
        .filter(|(s, _)| **s < 0.0)
        .map(|(_, x)| x * x)
        .sum();
    if !any_positive && neg_mass <= k_g {
        let x = scores
            .iter()
            .zip(x_bar)
            .map(|(&s, &xb)| if s < 0.0 { 0.0 } else { xb })
            .collect();
        return Ok(DeviationSolution { x, gamma: None });
    }

    // Left side of the multiplier equation; continuous and nonincreasing.
    let lhs = |g: f64| -> f64 {
        scores
            .iter()
            .zip(x_bar)
            .map(|(&s, &xb)| {
                if s >= -2.0 * g * xb {
                    let d = s / (2.0 * g);
                    d * d
                } else {
                    xb * xb
                }
            })
            .sum()
    };
    let norm = scores.iter().map(|s| s * s).sum::<f64>().sqrt();
    let mut hi = norm / (2.0 * k_g.sqrt());
    while lhs(hi) > k_g {
        hi *= 2.0;
    }
    let mut lo = hi;
    while lhs(lo) < k_g && lo > f64::MIN_POSITIVE {
        lo *= 0.5;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) > k_g {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let g = hi;
    let x = scores
        .iter()
        .zip(x_bar)
        .map(|(&s, &xb)| (xb + s / (2.0 * g)).max(0.0))
        .collect();
    Ok(DeviationSolution { x, gamma: Some(g) })
}

/// Good camp's deviation strategy on a network.
pub fn deviation_strategy(
    net: &Network,
    desired: &DesiredInvestment,
    k_g: f64,
) -> Result<Allocation, StrategyError> {
    if desired.x_bar.len() != net.n() {
        return Err(StrategyError::InvalidInput(
            "desired investments do not match the network size".into(),
        ));
    }
    let sol = deviation_from_scores(&net.good_scores()?, &desired.x_bar, k_g)?;
    let total = sol.x.iter().sum();
    Ok(Allocation::new(sol.x, total, None))
}

/// Bad camp's minimal-deviation response `y = max(y_bar + lambda * s_b, 0)`
/// reaching `s_b . y >= target`.
pub(crate) fn deviation_response(
    sb: &[f64],
    y_bar: &[f64],
    target: f64,
) -> Result<(Vec<f64>, f64), StrategyError> {
    let y_at = |l: f64| -> Vec<f64> {
        sb.iter()
            .zip(y_bar)
            .map(|(&s, &yb)| (yb + l * s).max(0.0))
            .collect()
    };
    let reach = |l: f64| dot(sb, &y_at(l));
    if reach(0.0) >= target {
        return Ok((y_bar.to_vec(), 0.0));
    }
    let mut hi = 1.0;
    let mut iters = 0;
    while reach(hi) < target {
        hi *= 2.0;
        iters += 1;
        if iters > 2000 || !hi.is_finite() {
            return Err(StrategyError::AdversaryInfeasible {
                shortfall: target - reach(hi.min(f64::MAX)),
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if reach(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((y_at(hi), hi))
}

/// Deviation game: the good camp's deviation strategy and the bad camp's
/// minimal-deviation response forcing the opinion sum to at most zero.
pub fn deviation_game(
    net: &Network,
    desired: &DesiredInvestment,
    k_g: f64,
) -> Result<GameOutcome, StrategyError> {
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    if desired.x_bar.len() != net.n() {
        return Err(StrategyError::InvalidInput(
            "desired investments do not match the network size".into(),
        ));
    }
    let sol = deviation_from_scores(&sg, &desired.x_bar, k_g)?;
    let total = sol.x.iter().sum();
    let x = Allocation::new(sol.x, total, None);
    let target = net.bias_term()? + dot(&sg, &x);
    let (y, lambda) = deviation_response(&sb, &desired.y_bar, target)?;
    let bad_dev: f64 = y
        .iter()
        .zip(&desired.y_bar)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let good_dev: f64 = x
        .iter()
        .zip(&desired.x_bar)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let y_total = y.iter().sum();
    let y = Allocation::new(y, y_total, None);
    let value = opinion_sum(net, &x, &y)?;
    let mut out = GameOutcome::new(x, y, value)
        .with_meta("deviation_budget", k_g)
        .with_meta("good_deviation", good_dev)
        .with_meta("bad_deviation", bad_dev)
        .with_meta("bad_lambda", lambda)
        .with_meta(
            "gamma_note",
            "the multiplier in the closed form is the solved root gamma_hat",
        );
    out = match sol.gamma {
        Some(g) => out.with_meta("gamma_hat", g),
        None => out.with_meta("gamma_hat", serde_json::Value::Null),
    };
    Ok(out)
}
