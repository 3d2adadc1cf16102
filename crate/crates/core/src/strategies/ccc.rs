//! Sequential play under the coupled constraint `x_i + y_i <= 1`. The leader
//! commits first and the follower best-responds. For a fixed follower
//! threshold `alpha` the leader's problem is a linear program solved greedily;
//! only thresholds at the follower's positive scores (plus zero) need to be
//! tried.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{check_budget, Allocation, GameOutcome};
use crate::error::StrategyError;
use crate::network::{Budgets, Network};
use crate::strategies::{descending_order, dot, greedy_fill};

const SET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCandidate {
    /// Lowest-index node at the threshold, `None` for the dummy node.
    pub j_hat: Option<usize>,
    pub threshold: f64,
    /// Nodes whose follower score exceeds the threshold.
    pub i_set: Vec<usize>,
    /// Nodes whose follower score equals the threshold.
    pub p_set: Vec<usize>,
}

impl BoundaryCandidate {
    pub fn is_dummy(&self) -> bool {
        self.j_hat.is_none()
    }
}

/// Candidate thresholds from the follower's scores, filtered by the
/// feasibility of the leader's constraints.
pub fn candidates_from_scores(
    follow: &[f64],
    k_lead: f64,
    k_follow: f64,
) -> Vec<BoundaryCandidate> {
    let mut values: Vec<f64> = follow.iter().copied().filter(|&s| s > 0.0).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values.dedup();
    let mut out = Vec::new();
    for alpha in values.into_iter().chain(std::iter::once(0.0)) {
        let i_set: Vec<usize> = (0..follow.len()).filter(|&j| follow[j] > alpha).collect();
        let p_set: Vec<usize> = (0..follow.len()).filter(|&j| follow[j] == alpha).collect();
        let dummy = alpha == 0.0;
        if i_set.len() as f64 > k_lead + k_follow + SET_TOL {
            continue;
        }
        if !dummy && ((i_set.len() + p_set.len()) as f64) < k_follow - SET_TOL {
            continue;
        }
        out.push(BoundaryCandidate {
            j_hat: if dummy { None } else { p_set.first().copied() },
            threshold: alpha,
            i_set,
            p_set,
        });
    }
    out
}

pub fn candidate_boundaries(
    net: &Network,
    budgets: Budgets,
) -> Result<Vec<BoundaryCandidate>, StrategyError> {
    Ok(candidates_from_scores(
        &net.bad_scores()?,
        budgets.k_g,
        budgets.k_b,
    ))
}

/// `lead_i + max(follow_i - alpha, 0)`
fn combined(lead: &[f64], follow: &[f64], alpha: f64) -> Vec<f64> {
    lead.iter()
        .zip(follow)
        .map(|(l, f)| l + (f - alpha).max(0.0))
        .collect()
}

/// Leader's greedy allocation for one threshold: first the forced minimum
/// on the above-threshold set, then a descending pass over the combined
/// score with the cap on the at-or-above-threshold set.
pub fn leader_allocation(
    cand: &BoundaryCandidate,
    lead: &[f64],
    follow: &[f64],
    k_lead: f64,
    k_follow: f64,
) -> Vec<f64> {
    let n = lead.len();
    let c = combined(lead, follow, cand.threshold);
    let order = descending_order(&c);
    let mut in_i = vec![false; n];
    let mut in_ip = vec![false; n];
    for &j in &cand.i_set {
        in_i[j] = true;
        in_ip[j] = true;
    }
    for &j in &cand.p_set {
        in_ip[j] = true;
    }
    let limit_ip = if cand.is_dummy() {
        f64::INFINITY
    } else {
        (cand.i_set.len() + cand.p_set.len()) as f64 - k_follow
    };

    let mut x = vec![0.0; n];
    let mut left = k_lead;
    let mut used_ip = 0.0;
    let mut need = (cand.i_set.len() as f64 - k_follow).max(0.0);
    for &i in order.iter().filter(|&&i| in_i[i]) {
        if need <= 0.0 {
            break;
        }
        let amt = need.min(1.0).min(left);
        x[i] = amt;
        need -= amt;
        left -= amt;
        used_ip += amt;
    }
    for &i in &order {
        if left <= 0.0 || c[i] <= 0.0 {
            break;
        }
        let mut room = 1.0 - x[i];
        if in_ip[i] {
            room = room.min(limit_ip - used_ip);
        }
        if room <= 0.0 {
            continue;
        }
        let amt = room.min(left);
        x[i] += amt;
        left -= amt;
        if in_ip[i] {
            used_ip += amt;
        }
    }
    x
}

/// Good camp's allocation for one candidate threshold on the bad camp's scores.
pub fn good_allocation_for_boundary(
    cand: &BoundaryCandidate,
    net: &Network,
    budgets: Budgets,
) -> Result<Allocation, StrategyError> {
    let x = leader_allocation(
        cand,
        &net.good_scores()?,
        &net.bad_scores()?,
        budgets.k_g,
        budgets.k_b,
    );
    Ok(Allocation::new(x, budgets.k_g, Some(1.0)))
}

/// `sum c x - sum max(follow - alpha, 0) - alpha * k_follow`
pub fn candidate_value(
    cand: &BoundaryCandidate,
    lead: &[f64],
    follow: &[f64],
    k_follow: f64,
    x: &[f64],
) -> f64 {
    let alpha = cand.threshold;
    let c = combined(lead, follow, alpha);
    let penalty: f64 = follow.iter().map(|f| (f - alpha).max(0.0)).sum();
    dot(&c, x) - penalty - alpha * k_follow
}

/// Follower's best response: greedy on its scores with per-node room `1 - x_i`.
pub fn follower_response(follow: &[f64], x: &[f64], k_follow: f64) -> Vec<f64> {
    greedy_fill(follow, k_follow, |i| 1.0 - x[i])
}

/// Outcome of the leader's problem in the leader's own frame, where the
/// leader maximizes `constant + lead . x - follow . y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
    pub candidate_value: f64,
    pub chosen: BoundaryCandidate,
    pub candidate_count: usize,
}

pub fn solve_leader(
    lead: &[f64],
    follow: &[f64],
    k_lead: f64,
    k_follow: f64,
    constant: f64,
) -> Result<LeaderSolution, StrategyError> {
    check_budget(k_lead)?;
    check_budget(k_follow)?;
    if lead.len() != follow.len() {
        return Err(StrategyError::InvalidInput(
            "score vectors differ in length".into(),
        ));
    }
    let cands = candidates_from_scores(follow, k_lead, k_follow);
    let evaluated: Vec<(Vec<f64>, f64)> = cands
        .par_iter()
        .map(|c| {
            let x = leader_allocation(c, lead, follow, k_lead, k_follow);
            let v = candidate_value(c, lead, follow, k_follow, &x);
            (x, v)
        })
        .collect();
    // Lowest threshold wins ties; candidates are stored in descending order.
    let mut best = evaluated.len() - 1;
    for k in (0..evaluated.len()).rev() {
        if evaluated[k].1 > evaluated[best].1 + SET_TOL {
            best = k;
        }
    }
    let (x, cv) = evaluated[best].clone();
    let y = follower_response(follow, &x, k_follow);
    let value = constant + dot(lead, &x) - dot(follow, &y);
    Ok(LeaderSolution {
        x,
        y,
        value,
        candidate_value: cv + constant,
        chosen: cands[best].clone(),
        candidate_count: cands.len(),
    })
}

fn annotate(out: GameOutcome, s: &LeaderSolution) -> GameOutcome {
    let j_hat = match s.chosen.j_hat {
        Some(j) => serde_json::Value::from(j),
        None => serde_json::Value::from("dummy"),
    };
    out.with_meta("j_hat", j_hat)
        .with_meta("threshold", s.chosen.threshold)
        .with_meta("i_set_size", s.chosen.i_set.len())
        .with_meta("p_set_size", s.chosen.p_set.len())
        .with_meta("candidate_count", s.candidate_count)
}

/// Good camp moves first.
pub fn ccc_maxmin(net: &Network, budgets: Budgets) -> Result<GameOutcome, StrategyError> {
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let bias = net.bias_term()?;
    let s = solve_leader(&sg, &sb, budgets.k_g, budgets.k_b, bias)?;
    let x = Allocation::new(s.x.clone(), budgets.k_g, Some(1.0));
    let y = Allocation::new(s.y.clone(), budgets.k_b, Some(1.0));
    let out = GameOutcome::new(x, y, s.value).with_meta("candidate_value", s.candidate_value);
    Ok(annotate(out, &s))
}

/// Bad camp moves first.
pub fn ccc_minmax(net: &Network, budgets: Budgets) -> Result<GameOutcome, StrategyError> {
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let bias = net.bias_term()?;
    let s = solve_leader(&sb, &sg, budgets.k_b, budgets.k_g, -bias)?;
    let x = Allocation::new(s.y.clone(), budgets.k_g, Some(1.0));
    let y = Allocation::new(s.x.clone(), budgets.k_b, Some(1.0));
    let out = GameOutcome::new(x, y, -s.value).with_meta("candidate_value", -s.candidate_value);
    Ok(annotate(out, &s))
}

/// Bad camp's best response to a committed good-camp allocation.
pub fn bad_best_response(
    net: &Network,
    x: &Allocation,
    k_b: f64,
) -> Result<Allocation, StrategyError> {
    check_budget(k_b)?;
    if x.len() != net.n() {
        return Err(StrategyError::InvalidInput(
            "allocation length mismatch".into(),
        ));
    }
    let y = follower_response(&net.bad_scores()?, x, k_b);
    Ok(Allocation::new(y, k_b, Some(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SG: [f64; 2] = [0.5, 0.4];
    const SB: [f64; 2] = [0.45, 0.1];

    #[test]
    fn crafted_candidates() {
        let c = candidates_from_scores(&SB, 1.0, 1.0);
        let th: Vec<f64> = c.iter().map(|c| c.threshold).collect();
        assert_eq!(th, vec![0.45, 0.1, 0.0]);
        assert_eq!(c[1].i_set, vec![0]);
        assert_eq!(c[1].p_set, vec![1]);
        assert!(c[2].is_dummy());
        assert_eq!(candidates_from_scores(&[-0.1, 0.0], 1.0, 1.0).len(), 1);
    }

    #[test]
    fn crafted_allocation_and_values() {
        let c = candidates_from_scores(&SB, 1.0, 1.0);
        assert_eq!(leader_allocation(&c[1], &SG, &SB, 1.0, 1.0), vec![1.0, 0.0]);
        assert_eq!(leader_allocation(&c[0], &SG, &SB, 1.0, 1.0), vec![0.0, 1.0]);
        let s = solve_leader(&SG, &SB, 1.0, 1.0, 0.0).unwrap();
        assert!((s.value - 0.4).abs() < 1e-15);
        assert_eq!(s.x, vec![1.0, 0.0]);
        assert_eq!(s.y, vec![0.0, 1.0]);
        let m = solve_leader(&SB, &SG, 1.0, 1.0, 0.0).unwrap();
        assert!((-m.value - (-0.05)).abs() < 1e-15);
    }

    #[test]
    fn spill_outside_threshold_set() {
        // Threshold 0.5 with P = {0, 1} and k_follow = 1.5 leaves room 0.5
        // on P; the rest of the budget must go to node 2.
        let lead = [0.9, 0.8, 0.3];
        let follow = [0.5, 0.5, 0.0];
        let cands = candidates_from_scores(&follow, 1.5, 1.5);
        let c = cands.iter().find(|c| c.threshold == 0.5).unwrap();
        let x = leader_allocation(c, &lead, &follow, 1.5, 1.5);
        assert_eq!(x, vec![0.5, 0.0, 1.0]);
    }

    #[test]
    fn follower_respects_room() {
        let y = follower_response(&[0.4, 0.3, -0.1], &[1.0, 0.25, 0.0], 5.0);
        assert_eq!(y, vec![0.0, 0.75, 0.0]);
    }
}
