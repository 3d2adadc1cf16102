use std::io::Cursor;

use campopt_core::{
    build_network, generated_network, influence_vector, karate, load_edge_list,
    weighted_class_weights, ExtraWeight, Graph, NetworkError, RowViolation,
};

#[test]
fn karate_dataset_shape() {
    let el = karate();
    let g = Graph::from_edge_list(&el).unwrap();
    assert_eq!(g.n(), 34);
    assert_eq!(g.undirected_edge_count(), 78);
}

#[test]
fn generated_rows_exhaust_the_unit_budget() {
    let g = Graph::from_edge_list(&karate()).unwrap();
    for seed in [1, 2, 42] {
        let net = generated_network(&g, 0.5, seed, None).unwrap();
        assert!(net.row_slack().iter().all(|s| s.abs() <= 1e-12));
    }
}

#[test]
fn star_graph_influence_under_weight_class() {
    let pairs: Vec<_> = (1..6).map(|j| (0, j)).collect();
    let g = Graph::from_pairs(6, &pairs).unwrap();
    let net = weighted_class_weights(&g, 3.0).unwrap();
    let r = influence_vector(&net).unwrap();
    for (i, d) in g.degrees().iter().enumerate() {
        assert!((r[i] - (3.0 + *d as f64) / 3.0).abs() < 1e-12, "node {i}");
    }
}

#[test]
fn parsed_edge_list_round_trips() {
    let text = "# comment\na b\nb c 0.5\n\nc a\n";
    let el = load_edge_list(Cursor::new(text), true).unwrap();
    assert_eq!(el.ids, vec!["a", "b", "c"]);
    assert_eq!(
        el.edges,
        vec![(0, 1, None), (1, 2, Some(0.5)), (2, 0, None)]
    );
    let undirected = load_edge_list(Cursor::new(text), false).unwrap();
    assert_eq!(undirected.edges.len(), 6);
}

#[test]
fn invalid_rows_are_rejected() {
    let extra = [
        ExtraWeight::new(0.5, 0.3, 0.3),
        ExtraWeight::new(0.2, 0.2, 0.2),
    ];
    match build_network(2, &[(1, 0, 0.3)], &extra, &[0.0, 0.0]) {
        Err(NetworkError::Invalid(rows)) => {
            assert_eq!(rows, vec![RowViolation::WeightBudget(0)]);
        }
        other => panic!("unexpected {other:?}"),
    }
}
