use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;

use campopt_core::robust::box_sum_around;
use campopt_core::strategies::concave::concave_game;
use campopt_core::{
    adversary_bounded, adversary_unbounded, ccc_maxmin, ccc_minmax, deviation_game,
    fundamental_game, generated_network, karate, load_edge_list, optimal_unbounded,
    robust_good_strategy, weighted_class_weights, Budgets, DesiredInvestment, EdgeList, Error,
    GameOutcome, Graph, Network, NetworkError, RobustError, SolveError, StrategyError,
};
use serde_json::{json, Value};

use crate::config::{Config, ConfigError};

pub struct Dataset {
    pub ids: Vec<String>,
    pub edges: usize,
    pub net: Network,
}

/// Strategy profile and numbers produced by one setting.
pub struct Outcome {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: BTreeMap<String, Value>,
    pub diagnostics: BTreeMap<String, Value>,
}

fn read_edges(cfg: &Config) -> Result<EdgeList, ConfigError> {
    if cfg.dataset == "karate" {
        return Ok(karate());
    }
    let f = File::open(&cfg.dataset)
        .map_err(|e| ConfigError::new(format!("cannot open dataset {}: {e}", cfg.dataset)))?;
    load_edge_list(BufReader::new(f), false).map_err(|e| match e {
        NetworkError::Parse { line, message } => {
            ConfigError::new(format!("dataset {} line {line}: {message}", cfg.dataset))
        }
        NetworkError::SelfLoop(line) => {
            ConfigError::new(format!("dataset {} line {line}: self-loop", cfg.dataset))
        }
        other => ConfigError::new(format!("dataset {}: {other}", cfg.dataset)),
    })
}

/// Loads the graph and attaches weights: the weighted-class scheme when
/// `alpha` is set, seeded random extra weights otherwise. Biases are zero.
pub fn load_dataset(cfg: &Config) -> Result<Dataset, ConfigError> {
    let list = read_edges(cfg)?;
    let graph = Graph::from_edge_list(&list)
        .map_err(|e| ConfigError::new(format!("dataset {}: {e}", cfg.dataset)))?;
    let net = match cfg.alpha {
        Some(a) => weighted_class_weights(&graph, a),
        None => generated_network(&graph, cfg.s, cfg.seed, None),
    }
    .map_err(|e| ConfigError::new(format!("dataset {}: {e}", cfg.dataset)))?;
    Ok(Dataset {
        ids: list.ids,
        edges: graph.undirected_edge_count(),
        net,
    })
}

fn read_desired(path: &str, ds: &Dataset) -> Result<DesiredInvestment, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(format!("cannot read desired investments {path}: {e}")))?;
    let n = ds.net.n();
    let (mut xb, mut yb) = (vec![0.0; n], vec![0.0; n]);
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = line.trim();
        if line.is_empty() || (k == 0 && line.starts_with("node")) {
            continue;
        }
        let bad = |m: String| ConfigError::new(format!("{path} line {line_no}: {m}"));
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(bad(format!(
                "expected `node,x_bar,y_bar`, got {} fields",
                f.len()
            )));
        }
        let i = ds
            .ids
            .iter()
            .position(|id| id == f[0])
            .ok_or_else(|| bad(format!("unknown node `{}`", f[0])))?;
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("invalid number `{s}`")))
        };
        xb[i] = num(f[1])?;
        yb[i] = num(f[2])?;
    }
    DesiredInvestment::new(xb, yb).map_err(|e| ConfigError::new(format!("{path}: {e}")))
}

fn from_game(g: GameOutcome, label: &str) -> Outcome {
    let mut values = BTreeMap::new();
    values.insert(label.to_string(), json!(g.value));
    for (k, v) in g.meta {
        values.insert(k, v);
    }
    Outcome {
        x: g.x.to_vec(),
        y: g.y.to_vec(),
        values,
        diagnostics: BTreeMap::new(),
    }
}

pub enum RunError {
    Config(ConfigError),
    Solver(Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

macro_rules! solver_error {
    ($($t:ty),*) => {$(
        impl From<$t> for RunError {
            fn from(e: $t) -> Self {
                RunError::Solver(e.into())
            }
        }
    )*};
}
solver_error!(StrategyError, RobustError, SolveError);

pub fn run_setting(cfg: &Config, ds: &Dataset) -> Result<Outcome, RunError> {
    let net = &ds.net;
    let budgets = Budgets::new(cfg.kg, cfg.kb).map_err(|e| ConfigError::new(e.to_string()))?;
    let (base, bounded) = cfg.base_setting();
    let out = match base {
        "fundamental" => from_game(fundamental_game(net, budgets, bounded)?, "value"),
        "concave" => from_game(concave_game(net, budgets, cfg.t, bounded)?, "value"),
        "adversary" => {
            let g = if bounded {
                adversary_bounded(net, cfg.kg)
            } else {
                adversary_unbounded(net, cfg.kg)
            };
            from_game(g?, "value")
        }
        "deviation" => {
            let desired = match &cfg.desired {
                Some(p) => read_desired(p, ds)?,
                None => DesiredInvestment::zeros(net.n()),
            };
            from_game(deviation_game(net, &desired, cfg.kg)?, "value")
        }
        "ccc-maxmin" => from_game(ccc_maxmin(net, budgets)?, "maxmin"),
        "ccc-minmax" => from_game(ccc_minmax(net, budgets)?, "minmax"),
        "robust" => {
            let poly = box_sum_around(net, cfg.eps_l, cfg.eps_o)?;
            let out = robust_good_strategy(net, &poly, budgets)?;
            let sb = net.bad_scores()?;
            let y = optimal_unbounded(&sb, cfg.kb)?;
            let mut values = BTreeMap::new();
            values.insert("worst_case_value".into(), json!(out.worst_case_value));
            let mut diagnostics = BTreeMap::new();
            let support: Vec<&str> = out
                .support(1e-9)
                .iter()
                .map(|&i| ds.ids[i].as_str())
                .collect();
            diagnostics.insert("support".into(), json!(support));
            let nf: Vec<Value> = out
                .feasible_set
                .iter()
                .map(|c| match c {
                    Some(i) => json!(ds.ids[*i]),
                    None => json!("dummy"),
                })
                .collect();
            diagnostics.insert("feasible_boundaries".into(), Value::Array(nf));
            diagnostics.insert("lp_rows".into(), json!(out.lp_rows));
            diagnostics.insert("lp_cols".into(), json!(out.lp_cols));
            diagnostics.insert("lp_pivots".into(), json!(out.pivots));
            Outcome {
                x: out.x.to_vec(),
                y: y.to_vec(),
                values,
                diagnostics,
            }
        }
        other => return Err(ConfigError::new(format!("unknown setting `{other}`")).into()),
    };
    Ok(out)
}
