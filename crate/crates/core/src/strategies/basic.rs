//! Fundamental setting: the camps' objectives decouple and each camp puts
//! its budget on the nodes with the largest decision score.

use crate::allocation::{check_budget, Allocation, GameOutcome};
use crate::error::{SolveError, StrategyError};
use crate::network::{Budgets, Network};
use crate::strategies::{dot, greedy_fill};

/// Whole budget on the first argmax of `scores` if that score is positive.
pub fn optimal_unbounded(scores: &[f64], budget: f64) -> Result<Allocation, StrategyError> {
    check_budget(budget)?;
    let mut x = Allocation::zeros(scores.len(), budget, None);
    let mut best: Option<usize> = None;
    for (i, &s) in scores.iter().enumerate() {
        if s > 0.0 && best.is_none_or(|b| s > scores[b]) {
            best = Some(i);
        }
    }
    if let Some(b) = best {
        x.amounts[b] = budget;
    }
    Ok(x)
}

/// Greedy fill in descending score order with at most `cap` per node.
pub fn optimal_bounded(scores: &[f64], budget: f64, cap: f64) -> Result<Allocation, StrategyError> {
    check_budget(budget)?;
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(StrategyError::InvalidInput(format!(
            "cap must be positive, got {cap}"
        )));
    }
    let amounts = greedy_fill(scores, budget, |_| cap);
    Ok(Allocation::new(amounts, budget, Some(cap)))
}

/// Both camps' optimal strategies in the fundamental setting. The game value
/// is the same whichever camp moves first.
pub fn fundamental_game(
    net: &Network,
    budgets: Budgets,
    bounded: bool,
) -> Result<GameOutcome, StrategyError> {
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let (x, y) = if bounded {
        (
            optimal_bounded(&sg, budgets.k_g, 1.0)?,
            optimal_bounded(&sb, budgets.k_b, 1.0)?,
        )
    } else {
        (
            optimal_unbounded(&sg, budgets.k_g)?,
            optimal_unbounded(&sb, budgets.k_b)?,
        )
    };
    let bias = net.bias_term()?;
    let value = bias + dot(&sg, &x) - dot(&sb, &y);
    let max_g = sg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_b = sb.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GameOutcome::new(x, y, value)
        .with_meta("maxmin", value)
        .with_meta("minmax", value)
        .with_meta("maxmin_equals_minmax", true)
        .with_meta("bias_term", bias)
        .with_meta("max_good_score", max_g)
        .with_meta("max_bad_score", max_b))
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// True when every node has the same score for both camps (within `tol`), so
/// any budget-exhausting allocation is optimal.
pub fn is_random_optimal(net: &Network, tol: f64) -> Result<bool, SolveError> {
    Ok(spread(&net.good_scores()?) <= tol && spread(&net.bad_scores()?) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_network, ExtraWeight};

    #[test]
    fn unbounded_examples() {
        assert_eq!(
            optimal_unbounded(&[0.3, 0.2], 2.0).unwrap().amounts,
            vec![2.0, 0.0]
        );
        assert_eq!(
            optimal_unbounded(&[-0.1, -0.5], 3.0).unwrap().amounts,
            vec![0.0, 0.0]
        );
        assert_eq!(
            optimal_unbounded(&[0.4, 0.4], 1.0).unwrap().amounts,
            vec![1.0, 0.0]
        );
        assert_eq!(
            optimal_unbounded(&[0.0, 0.0], 1.0).unwrap().amounts,
            vec![0.0, 0.0]
        );
        assert!(optimal_unbounded(&[1.0], -1.0).is_err());
    }

    #[test]
    fn bounded_examples() {
        assert_eq!(
            optimal_bounded(&[0.3, 0.2, 0.1], 1.5, 1.0).unwrap().amounts,
            vec![1.0, 0.5, 0.0]
        );
        assert_eq!(
            optimal_bounded(&[0.3, -0.2], 5.0, 1.0).unwrap().amounts,
            vec![1.0, 0.0]
        );
        assert_eq!(
            optimal_bounded(&[0.3, 0.2], 0.0, 1.0).unwrap().amounts,
            vec![0.0, 0.0]
        );
        assert_eq!(
            optimal_bounded(&[0.1, 0.3, 0.3], 1.5, 1.0).unwrap().amounts,
            vec![0.0, 1.0, 0.5]
        );
    }

    #[test]
    fn symmetric_game_has_zero_value() {
        let net = build_network(
            2,
            &[(0, 1, 0.3), (1, 0, 0.2)],
            &[
                ExtraWeight::new(0.2, 0.2, 0.2),
                ExtraWeight::new(0.1, 0.3, 0.3),
            ],
            &[0.0, 0.0],
        )
        .unwrap();
        for bounded in [false, true] {
            let g = fundamental_game(&net, Budgets::new(2.0, 2.0).unwrap(), bounded).unwrap();
            assert!(g.value.abs() < 1e-15);
        }
    }

    #[test]
    fn single_node_is_random_optimal() {
        let net = build_network(1, &[], &[ExtraWeight::new(0.2, 0.3, 0.1)], &[0.0]).unwrap();
        assert!(is_random_optimal(&net, 1e-12).unwrap());
    }
}
