//! The weighted social network: intra-network weights `w_ij`, extra-network
//! weights `(w_ii0, w_ig, w_ib)`, and biases `v_i0`.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::InfluenceVector;
use crate::error::{NetworkError, RowViolation, SolveError};
use crate::sparse::CsrMatrix;

/// Slack allowed on the full row weight budget.
pub const ROW_BUDGET_TOL: f64 = 1e-12;
/// Required margin on the strict substochasticity of `w`.
pub const SUBSTOCHASTIC_MARGIN: f64 = 1e-9;

const KARATE_EDGES: &str = include_str!("../data/karate.txt");

/// Which row constraints `build_network` enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ValidationPolicy {
    /// Both the strict substochasticity of `w` and the unit row budget.
    #[default]
    Strict,
    /// Only strict substochasticity. Used by weight classes whose extra
    /// weights exceed the unit row budget but still define a convergent
    /// dynamics.
    SubstochasticOnly,
}

/// Extra-network weights of one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtraWeight {
    pub self_weight: f64,
    pub good_weight: f64,
    pub bad_weight: f64,
}

impl ExtraWeight {
    pub fn new(self_weight: f64, good_weight: f64, bad_weight: f64) -> Self {
        ExtraWeight {
            self_weight,
            good_weight,
            bad_weight,
        }
    }

    pub fn total(&self) -> f64 {
        self.self_weight + self.good_weight + self.bad_weight
    }

    fn abs_total(&self) -> f64 {
        self.self_weight.abs() + self.good_weight.abs() + self.bad_weight.abs()
    }
}

/// Validated network. Immutable after construction; the influence vector is
/// computed lazily once and then shared.
#[derive(Debug, Clone)]
pub struct Network {
    n: usize,
    w: CsrMatrix,
    self_weight: Vec<f64>,
    good_weight: Vec<f64>,
    bad_weight: Vec<f64>,
    bias: Vec<f64>,
    policy: ValidationPolicy,
    influence: OnceLock<InfluenceVector>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.w == other.w
            && self.self_weight == other.self_weight
            && self.good_weight == other.good_weight
            && self.bad_weight == other.bad_weight
            && self.bias == other.bias
    }
}

/// Builds and validates a network with the strict policy.
pub fn build_network(
    n: usize,
    edges: &[(usize, usize, f64)],
    extra: &[ExtraWeight],
    bias: &[f64],
) -> Result<Network, NetworkError> {
    Network::with_policy(n, edges, extra, bias, ValidationPolicy::Strict)
}

impl Network {
    pub fn with_policy(
        n: usize,
        edges: &[(usize, usize, f64)],
        extra: &[ExtraWeight],
        bias: &[f64],
        policy: ValidationPolicy,
    ) -> Result<Network, NetworkError> {
        if extra.len() != n {
            return Err(NetworkError::DimensionMismatch {
                what: "extra weights",
                got: extra.len(),
                expected: n,
            });
        }
        if bias.len() != n {
            return Err(NetworkError::DimensionMismatch {
                what: "bias",
                got: bias.len(),
                expected: n,
            });
        }
        let mut seen = BTreeSet::new();
        for &(s, d, v) in edges {
            for idx in [s, d] {
                if idx >= n {
                    return Err(NetworkError::NodeOutOfRange { index: idx, n });
                }
            }
            if !v.is_finite() {
                return Err(NetworkError::NonFinite("edge weight"));
            }
            if !seen.insert((s, d)) {
                return Err(NetworkError::DuplicateEdge(s, d));
            }
        }
        for e in extra {
            if !(e.self_weight.is_finite() && e.good_weight.is_finite() && e.bad_weight.is_finite())
            {
                return Err(NetworkError::NonFinite("extra weights"));
            }
        }
        for (i, b) in bias.iter().enumerate() {
            if !b.is_finite() {
                return Err(NetworkError::NonFinite("bias"));
            }
            if b.abs() > 1.0 {
                return Err(NetworkError::BiasOutOfRange(i));
            }
        }

        let w = CsrMatrix::from_triplets(n, edges);
        let mut violations = Vec::new();
        for (i, e) in extra.iter().enumerate() {
            let intra = w.row_abs_sum(i);
            if intra > 1.0 - SUBSTOCHASTIC_MARGIN {
                violations.push(RowViolation::Substochasticity(i));
            }
            if policy == ValidationPolicy::Strict && intra + e.abs_total() > 1.0 + ROW_BUDGET_TOL {
                violations.push(RowViolation::WeightBudget(i));
            }
        }
        if !violations.is_empty() {
            return Err(NetworkError::Invalid(violations));
        }

        Ok(Network {
            n,
            w,
            self_weight: extra.iter().map(|e| e.self_weight).collect(),
            good_weight: extra.iter().map(|e| e.good_weight).collect(),
            bad_weight: extra.iter().map(|e| e.bad_weight).collect(),
            bias: bias.to_vec(),
            policy,
            influence: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> &CsrMatrix {
        &self.w
    }

    pub fn self_weight(&self) -> &[f64] {
        &self.self_weight
    }

    pub fn good_weight(&self) -> &[f64] {
        &self.good_weight
    }

    pub fn bad_weight(&self) -> &[f64] {
        &self.bad_weight
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn policy(&self) -> ValidationPolicy {
        self.policy
    }

    pub fn extra(&self, i: usize) -> ExtraWeight {
        ExtraWeight::new(self.self_weight[i], self.good_weight[i], self.bad_weight[i])
    }

    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.w.triplets().collect()
    }

    /// `1 - (|w_ii0| + sum_j |w_ij| + |w_ig| + |w_ib|)` for every row.
    pub fn row_slack(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| 1.0 - (self.w.row_abs_sum(i) + self.extra(i).abs_total()))
            .collect()
    }

    /// Influence vector `r` solving `(I - w^T) r = 1`, computed on first use.
    pub fn influence(&self) -> Result<&InfluenceVector, SolveError> {
        if let Some(r) = self.influence.get() {
            return Ok(r);
        }
        let r = crate::dynamics::compute_influence(self)?;
        Ok(self.influence.get_or_init(|| r))
    }

    /// Per-node decision scores `r_i w_ig`.
    pub fn good_scores(&self) -> Result<Vec<f64>, SolveError> {
        let r = self.influence()?;
        Ok(r.iter()
            .zip(&self.good_weight)
            .map(|(r, w)| r * w)
            .collect())
    }

    /// Per-node decision scores `r_i w_ib`.
    pub fn bad_scores(&self) -> Result<Vec<f64>, SolveError> {
        let r = self.influence()?;
        Ok(r.iter().zip(&self.bad_weight).map(|(r, w)| r * w).collect())
    }

    /// `sum_i r_i w_ii0 v_i0`, the investment-independent part of the opinion sum.
    pub fn bias_term(&self) -> Result<f64, SolveError> {
        let r = self.influence()?;
        Ok((0..self.n)
            .map(|i| r[i] * self.self_weight[i] * self.bias[i])
            .sum())
    }

    /// Same topology and intra-network weights with replaced extra weights.
    pub fn with_extra(&self, extra: &[ExtraWeight]) -> Result<Network, NetworkError> {
        Network::with_policy(self.n, &self.edges(), extra, &self.bias, self.policy)
    }

    pub fn with_bias(&self, bias: &[f64]) -> Result<Network, NetworkError> {
        let extra: Vec<_> = (0..self.n).map(|i| self.extra(i)).collect();
        Network::with_policy(self.n, &self.edges(), &extra, bias, self.policy)
    }
}

/// Campaign budgets of the two camps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub k_g: f64,
    pub k_b: f64,
}

impl Budgets {
    pub fn new(k_g: f64, k_b: f64) -> Result<Self, NetworkError> {
        if !(k_g.is_finite() && k_b.is_finite()) || k_g < 0.0 || k_b < 0.0 {
            return Err(NetworkError::InvalidParameter(format!(
                "budgets must be finite and nonnegative, got k_g={k_g}, k_b={k_b}"
            )));
        }
        Ok(Budgets { k_g, k_b })
    }
}

/// Undirected simple graph, used as the topology for generated weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from undirected pairs; repeated pairs and orientation
    /// are collapsed. Self-loops are rejected.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Graph, NetworkError> {
        let mut sets = vec![BTreeSet::new(); n];
        for &(a, b) in pairs {
            for idx in [a, b] {
                if idx >= n {
                    return Err(NetworkError::NodeOutOfRange { index: idx, n });
                }
            }
            if a == b {
                return Err(NetworkError::InvalidParameter(format!(
                    "self-loop at node {a}"
                )));
            }
            sets[a].insert(b);
            sets[b].insert(a);
        }
        Ok(Graph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn from_edge_list(list: &EdgeList) -> Result<Graph, NetworkError> {
        let pairs: Vec<_> = list.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        Graph::from_pairs(list.n(), &pairs)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Seeded Erdos-Renyi style graph with exactly `m` distinct edges.
    pub fn random(n: usize, m: usize, seed: u64) -> Graph {
        let max_edges = n * n.saturating_sub(1) / 2;
        let m = m.min(max_edges);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut set = BTreeSet::new();
        while set.len() < m {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        let pairs: Vec<_> = set.into_iter().collect();
        Graph::from_pairs(n, &pairs).expect("generated pairs are in range")
    }
}

/// Parsed edge list with nodes remapped to `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    /// Directed edges `(src, dst, weight)`; undirected input is expanded to
    /// both directions.
    pub edges: Vec<(usize, usize, Option<f64>)>,
    /// Original token of every dense id, in first-appearance order.
    pub ids: Vec<String>,
}

impl EdgeList {
    pub fn n(&self) -> usize {
        self.ids.len()
    }
}

/// Reads `src dst [weight]` lines. `#` starts a comment; blank lines are
/// skipped. With `directed == false` every edge is stored in both
/// directions and repeated undirected pairs are kept once.
pub fn load_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<EdgeList, NetworkError> {
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |tok: &str| -> usize {
        if let Some(&i) = index.get(tok) {
            return i;
        }
        let i = ids.len();
        ids.push(tok.to_string());
        index.insert(tok.to_string(), i);
        i
    };

    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, line) in reader.lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| NetworkError::Io(e.to_string()))?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 && toks.len() != 3 {
            return Err(NetworkError::Parse {
                line: line_no,
                message: format!("expected `src dst [weight]`, got {} fields", toks.len()),
            });
        }
        if toks[0] == toks[1] {
            return Err(NetworkError::SelfLoop(line_no));
        }
        let weight = match toks.get(2) {
            Some(t) => {
                let v: f64 = t.parse().map_err(|_| NetworkError::Parse {
                    line: line_no,
                    message: format!("invalid weight `{t}`"),
                })?;
                if !v.is_finite() {
                    return Err(NetworkError::Parse {
                        line: line_no,
                        message: "non-finite weight".into(),
                    });
                }
                Some(v)
            }
            None => None,
        };
        let a = intern(toks[0]);
        let b = intern(toks[1]);
        if directed {
            if seen.insert((a, b)) {
                edges.push((a, b, weight));
            }
        } else if seen.insert((a.min(b), a.max(b))) {
            edges.push((a, b, weight));
            edges.push((b, a, weight));
        }
    }
    Ok(EdgeList { edges, ids })
}

/// Zachary's karate club (34 nodes, 78 undirected edges).
pub fn karate() -> EdgeList {
    load_edge_list(KARATE_EDGES.as_bytes(), false).expect("embedded karate edge list is valid")
}

/// Randomly generated extra-network weights with a fixed total per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtraWeights {
    pub tuples: Vec<ExtraWeight>,
    /// Weight `w_ij` placed on every incident edge of node `i`.
    pub edge_weight: Vec<f64>,
}

/// Draws `(w_ii0, w_ig, w_ib)` for every node as three uniforms normalized
/// to sum to `s`, and spreads the remaining `1 - s` evenly over incident
/// edges. Isolated nodes get tuples normalized to sum to 1.
pub fn generate_extra_weights(
    degrees: &[usize],
    s: f64,
    seed: u64,
) -> Result<ExtraWeights, NetworkError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(NetworkError::InvalidParameter(format!(
            "extra-network mass s must lie in (0, 1), got {s}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples = Vec::with_capacity(degrees.len());
    let mut edge_weight = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let parts: [f64; 3] = loop {
            let p = [
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            ];
            if p.iter().sum::<f64>() > 0.0 {
                break p;
            }
        };
        let total = if d == 0 { 1.0 } else { s };
        let sum: f64 = parts.iter().sum();
        let a = total * parts[0] / sum;
        let b = total * parts[1] / sum;
        let c = total - a - b;
        tuples.push(ExtraWeight::new(a, b, c));
        edge_weight.push(if d == 0 { 0.0 } else { (1.0 - s) / d as f64 });
    }
    Ok(ExtraWeights {
        tuples,
        edge_weight,
    })
}

/// Network on `graph` with generated extra weights and the given bias
/// (`None` means an unbiased population).
pub fn generated_network(
    graph: &Graph,
    s: f64,
    seed: u64,
    bias: Option<&[f64]>,
) -> Result<Network, NetworkError> {
    let extra = generate_extra_weights(&graph.degrees(), s, seed)?;
    let edges: Vec<_> = (0..graph.n())
        .flat_map(|i| {
            let wij = extra.edge_weight[i];
            graph.neighbors(i).iter().map(move |&j| (i, j, wij))
        })
        .collect();
    let zeros = vec![0.0; graph.n()];
    build_network(graph.n(), &edges, &extra.tuples, bias.unwrap_or(&zeros))
}

/// Weight class with `w_ig = w_ib = w_ii0 = w_ij = 1 / (alpha + d_i)` on
/// every row. For `alpha < 3` these rows exceed the unit weight budget, so the
/// network is built with [`ValidationPolicy::SubstochasticOnly`].
pub fn weighted_class_weights(graph: &Graph, alpha: f64) -> Result<Network, NetworkError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(NetworkError::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let n = graph.n();
    let mut edges = Vec::new();
    let mut extra = Vec::with_capacity(n);
    for i in 0..n {
        let v = 1.0 / (alpha + graph.neighbors(i).len() as f64);
        edges.extend(graph.neighbors(i).iter().map(|&j| (i, j, v)));
        extra.push(ExtraWeight::new(v, v, v));
    }
    let policy = if alpha >= 3.0 {
        ValidationPolicy::Strict
    } else {
        ValidationPolicy::SubstochasticOnly
    };
    Network::with_policy(n, &edges, &extra, &vec![0.0; n], policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_extra(n: usize, e: ExtraWeight) -> Vec<ExtraWeight> {
        vec![e; n]
    }

    #[test]
    fn empty_edge_set_is_valid() {
        let net = build_network(
            2,
            &[],
            &uniform_extra(2, ExtraWeight::new(0.2, 0.2, 0.1)),
            &[0.0, 0.0],
        )
        .unwrap();
        assert_eq!(net.n(), 2);
        assert_eq!(net.w().nnz(), 0);
    }

    #[test]
    fn unit_self_loop_violates_substochasticity() {
        let err = build_network(
            1,
            &[(0, 0, 1.0)],
            &uniform_extra(1, ExtraWeight::new(0.0, 0.0, 0.0)),
            &[0.0],
        )
        .unwrap_err();
        match err {
            NetworkError::Invalid(v) => assert!(v.contains(&RowViolation::Substochasticity(0))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_weights_are_allowed() {
        let net = build_network(
            2,
            &[(0, 1, 0.4), (1, 0, -0.4)],
            &uniform_extra(2, ExtraWeight::new(0.2, 0.2, 0.1)),
            &[0.0, 0.0],
        );
        assert!(net.is_ok());
    }

    #[test]
    fn all_violated_rows_are_listed() {
        let err = build_network(
            3,
            &[(0, 1, 0.7), (1, 0, 0.995), (2, 0, 0.5)],
            &[
                ExtraWeight::new(0.2, 0.1, 0.1),
                ExtraWeight::new(0.0, 0.0, 0.0),
                ExtraWeight::new(0.1, 0.1, 0.1),
            ],
            &[0.0; 3],
        )
        .unwrap_err();
        assert_eq!(
            err,
            NetworkError::Invalid(vec![RowViolation::WeightBudget(0)])
        );
        let err = build_network(
            2,
            &[(0, 1, 1.0), (1, 0, 1.5)],
            &uniform_extra(2, ExtraWeight::new(0.0, 0.0, 0.0)),
            &[0.0; 2],
        )
        .unwrap_err();
        assert_eq!(
            err,
            NetworkError::Invalid(vec![
                RowViolation::Substochasticity(0),
                RowViolation::Substochasticity(1),
                RowViolation::WeightBudget(1),
            ])
        );
    }

    #[test]
    fn dimension_and_range_errors() {
        let e = uniform_extra(2, ExtraWeight::new(0.1, 0.1, 0.1));
        assert!(matches!(
            build_network(2, &[], &e, &[0.0]),
            Err(NetworkError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            build_network(2, &[(0, 2, 0.1)], &e, &[0.0, 0.0]),
            Err(NetworkError::NodeOutOfRange { index: 2, n: 2 })
        ));
        assert!(matches!(
            build_network(2, &[(0, 1, f64::NAN)], &e, &[0.0, 0.0]),
            Err(NetworkError::NonFinite(_))
        ));
        assert!(matches!(
            build_network(2, &[], &e, &[0.0, 1.5]),
            Err(NetworkError::BiasOutOfRange(1))
        ));
        assert!(matches!(
            build_network(2, &[(0, 1, 0.1), (0, 1, 0.1)], &e, &[0.0, 0.0]),
            Err(NetworkError::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn edge_list_parsing() {
        let l = load_edge_list("0 1\n1 2\n".as_bytes(), false).unwrap();
        assert_eq!(l.edges.len(), 4);
        assert_eq!(l.n(), 3);
        assert_eq!(
            load_edge_list("0 0\n".as_bytes(), false).unwrap_err(),
            NetworkError::SelfLoop(1)
        );
        let l = load_edge_list("# header\n\n a b 0.5 # trailing\nb c\n".as_bytes(), true).unwrap();
        assert_eq!(l.ids, vec!["a", "b", "c"]);
        assert_eq!(l.edges, vec![(0, 1, Some(0.5)), (1, 2, None)]);
        assert!(matches!(
            load_edge_list("0 1\n2\n".as_bytes(), false),
            Err(NetworkError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_edge_list("0 1 x\n".as_bytes(), false),
            Err(NetworkError::Parse { line: 1, .. })
        ));
        let l = load_edge_list("0 1\n1 0\n".as_bytes(), false).unwrap();
        assert_eq!(l.edges.len(), 2);
    }

    #[test]
    fn karate_has_expected_size() {
        let k = karate();
        assert_eq!(k.n(), 34);
        assert_eq!(k.edges.len(), 156);
        let g = Graph::from_edge_list(&k).unwrap();
        assert_eq!(g.undirected_edge_count(), 78);
    }

    #[test]
    fn extra_weights_partition_each_row() {
        let w = generate_extra_weights(&[4, 1, 0], 0.5, 7).unwrap();
        assert_eq!(w.edge_weight[0], 0.125);
        for (t, want) in w.tuples.iter().zip([0.5, 0.5, 1.0]) {
            assert!((t.total() - want).abs() < 1e-15);
            assert!(t.self_weight >= 0.0 && t.good_weight >= 0.0 && t.bad_weight >= 0.0);
        }
        let w = generate_extra_weights(&[3], 0.9, 1).unwrap();
        assert!((w.edge_weight[0] - 0.1 / 3.0).abs() < 1e-15);
        assert_eq!(
            generate_extra_weights(&[1, 2, 3], 0.5, 42).unwrap(),
            generate_extra_weights(&[1, 2, 3], 0.5, 42).unwrap()
        );
        assert_ne!(
            generate_extra_weights(&[1, 2, 3], 0.5, 42).unwrap(),
            generate_extra_weights(&[1, 2, 3], 0.5, 43).unwrap()
        );
        assert!(generate_extra_weights(&[1], 1.0, 0).is_err());
        assert!(generate_extra_weights(&[1], 0.0, 0).is_err());
    }

    #[test]
    fn generated_karate_has_zero_row_slack() {
        let g = Graph::from_edge_list(&karate()).unwrap();
        let net = generated_network(&g, 0.5, 42, None).unwrap();
        for s in net.row_slack() {
            assert!(s.abs() <= 1e-12, "slack {s}");
        }
    }

    #[test]
    fn weight_class_rows() {
        let star = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let net = weighted_class_weights(&star, 3.0).unwrap();
        assert_eq!(net.policy(), ValidationPolicy::Strict);
        assert!((net.w().get(0, 1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((net.good_weight()[0] - 1.0 / 6.0).abs() < 1e-15);
        assert!((net.w().get(1, 0) - 0.25).abs() < 1e-15);
        assert!((net.bad_weight()[2] - 0.25).abs() < 1e-15);
        let relaxed = weighted_class_weights(&star, 1.0).unwrap();
        assert_eq!(relaxed.policy(), ValidationPolicy::SubstochasticOnly);
        assert!(weighted_class_weights(&star, 0.0).is_err());
    }

    #[test]
    fn budgets_reject_negative() {
        assert!(Budgets::new(1.0, 2.0).is_ok());
        assert!(Budgets::new(-1.0, 2.0).is_err());
        assert!(Budgets::new(1.0, f64::NAN).is_err());
    }
}
