//! Optimal investment strategies for the competing camps.

pub mod adversary;
pub mod basic;
pub mod ccc;
pub mod concave;

/// Node indices sorted by descending score, lowest index first among ties.
pub(crate) fn descending_order(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

/// Fills nodes in descending score order, each up to `room(i)`, until the
/// budget is spent or the scores become nonpositive.
pub(crate) fn greedy_fill(scores: &[f64], budget: f64, room: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut x = vec![0.0; scores.len()];
    let mut left = budget;
    for i in descending_order(scores) {
        if left <= 0.0 || scores[i] <= 0.0 {
            break;
        }
        let amt = room(i).max(0.0).min(left);
        x[i] = amt;
        left -= amt;
    }
    x
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
