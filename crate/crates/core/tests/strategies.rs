use campopt_core::oracle::grid_search_allocation;
use campopt_core::verify::{karate_network, random_network};
use campopt_core::{
    adversary_unbounded, concave_bounded, concave_unbounded, deviation_game, fundamental_game,
    optimal_bounded, optimal_unbounded, solve_lp, Budgets, DesiredInvestment, LpProblem, LpStatus,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// max s.x over sum x <= budget, 0 <= x <= cap, solved as an LP.
fn lp_best(s: &[f64], budget: f64, cap: Option<f64>) -> f64 {
    let mut lp = LpProblem::new(s.len());
    lp.objective = s.to_vec();
    lp.add_le((0..s.len()).map(|i| (i, 1.0)).collect(), budget);
    if let Some(c) = cap {
        for i in 0..s.len() {
            lp.add_le(vec![(i, 1.0)], c);
        }
    }
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    sol.value
}

#[test]
fn linear_examples() {
    assert_eq!(&*optimal_unbounded(&[0.3, 0.2], 2.0).unwrap(), &[2.0, 0.0]);
    assert_eq!(
        &*optimal_unbounded(&[-0.1, -0.5], 3.0).unwrap(),
        &[0.0, 0.0]
    );
    assert_eq!(&*optimal_unbounded(&[0.4, 0.4], 1.0).unwrap(), &[1.0, 0.0]);
    assert_eq!(
        &*optimal_bounded(&[0.3, 0.5, 0.1], 2.5, 1.0).unwrap(),
        &[1.0, 1.0, 0.5]
    );
}

#[test]
fn grid_agrees_on_linear_example() {
    let (x, v) = grid_search_allocation(|x| 0.3 * x[0] + 0.2 * x[1], 2.0, None, 2, 0.05).unwrap();
    assert!((x[0] - 2.0).abs() < 1e-9 && x[1].abs() < 1e-9);
    assert!((v - 0.6).abs() < 1e-9);
}

#[test]
fn fundamental_matches_lp_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let n = rng.random_range(2..=12);
        let net = random_network(&mut rng, n, true);
        let b = Budgets::new(rng.random_range(0.0..4.0), rng.random_range(0.0..4.0)).unwrap();
        let sg = net.good_scores().unwrap();
        let sb = net.bad_scores().unwrap();
        let bias = net.bias_term().unwrap();
        for (bounded, cap) in [(false, None), (true, Some(1.0))] {
            let g = fundamental_game(&net, b, bounded).unwrap();
            let lp = bias + lp_best(&sg, b.k_g, cap) - lp_best(&sb, b.k_b, cap);
            assert!((g.value - lp).abs() <= 1e-9, "{} vs {lp}", g.value);
        }
    }
}

#[test]
fn unbounded_value_decomposes() {
    let net = karate_network();
    let b = Budgets::new(5.0, 3.0).unwrap();
    let g = fundamental_game(&net, b, false).unwrap();
    let best = |s: Vec<f64>| s.into_iter().fold(0.0, f64::max);
    let want = net.bias_term().unwrap() + 5.0 * best(net.good_scores().unwrap())
        - 3.0 * best(net.bad_scores().unwrap());
    assert!((g.value - want).abs() < 1e-12);
    assert_eq!(g.meta_f64("maxmin"), g.meta_f64("minmax"));
}

#[test]
fn scaling_scores_keeps_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50 {
        let s: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = rng.random_range(0.01..100.0);
        let scaled: Vec<f64> = s.iter().map(|v| v * c).collect();
        let a = optimal_unbounded(&s, 2.0).unwrap();
        let b = optimal_unbounded(&scaled, 2.0).unwrap();
        let support = |x: &[f64]| x.iter().map(|v| *v > 0.0).collect::<Vec<_>>();
        assert_eq!(support(&a), support(&b));
    }
}

#[test]
fn bounded_greedy_admits_no_improving_transfer() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let eps = 1e-3;
    for _ in 0..50 {
        let s: Vec<f64> = (0..7).map(|_| rng.random_range(-0.5..1.0)).collect();
        let budget = rng.random_range(0.0..7.0);
        let x = optimal_bounded(&s, budget, 1.0).unwrap();
        let base = dot(&s, &x);
        for i in 0..s.len() {
            for j in 0..s.len() {
                if x[i] >= eps && s[j] < s[i] && x[j] + eps <= 1.0 {
                    let mut z = x.to_vec();
                    z[i] -= eps;
                    z[j] += eps;
                    assert!(dot(&s, &z) <= base + 1e-12);
                }
            }
        }
    }
}

#[test]
fn concave_examples() {
    let x = concave_unbounded(&[2.0, 1.0], 5.0, 2.0).unwrap();
    assert!((x[0] - 4.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    let (g, _) =
        grid_search_allocation(|x| 2.0 * x[0].sqrt() + x[1].sqrt(), 5.0, None, 2, 0.01).unwrap();
    assert!((g[0] - 4.0).abs() <= 0.02 && (g[1] - 1.0).abs() <= 0.02);

    let s = [0.3, 0.5, 0.2];
    let x = concave_unbounded(&s, 2.0, 1e6).unwrap();
    for i in 0..3 {
        let prop = 2.0 * s[i] / 1.0;
        assert!((x[i] - prop).abs() / prop <= 1e-4);
    }
    assert!(concave_unbounded(&[-1.0, 0.0], 3.0, 2.0)
        .unwrap()
        .iter()
        .all(|&v| v == 0.0));
}

#[test]
fn concave_bounded_matches_grid_on_three_nodes() {
    let s = [0.9, 0.6, 0.2];
    let f = |x: &[f64]| -> f64 { s.iter().zip(x).map(|(a, b)| a * b.sqrt()).sum() };
    let x = concave_bounded(&s, 1.5, 2.0, 1.0).unwrap();
    let (_, gv) = grid_search_allocation(f, 1.5, Some(1.0), 3, 0.01).unwrap();
    assert!(f(&x) >= gv - 1e-12);
    assert!(f(&x) - gv <= 1e-3);
}

#[test]
fn karate_adversary_outspends_good_camp() {
    let net = karate_network();
    let value = fundamental_game(&net, Budgets::new(5.0, 5.0).unwrap(), false)
        .unwrap()
        .value;
    assert!(value > 0.0);
    let out = adversary_unbounded(&net, 5.0).unwrap();
    assert!(out.meta_f64("bad_total").unwrap() > 5.0);
    assert!(out.value.abs() < 1e-9);
}

#[test]
fn deviation_game_neutralizes_the_sum() {
    let net = karate_network();
    let n = net.n();
    let mut x_bar = vec![0.0; n];
    x_bar[0] = 1.0;
    let desired = DesiredInvestment::new(x_bar.clone(), vec![0.0; n]).unwrap();
    let g = deviation_game(&net, &desired, 0.5).unwrap();
    let dev: f64 = g.x.iter().zip(&x_bar).map(|(a, b)| (a - b).powi(2)).sum();
    assert!(dev <= 0.5 + 1e-9);
    assert!(g.value <= 1e-9);
}

fn isolated_pair(wg: [f64; 2], wb: [f64; 2]) -> campopt_core::Network {
    campopt_core::build_network(
        2,
        &[],
        &[
            campopt_core::ExtraWeight::new(0.0, wg[0], wb[0]),
            campopt_core::ExtraWeight::new(0.0, wg[1], wb[1]),
        ],
        &[0.0, 0.0],
    )
    .unwrap()
}

#[test]
fn bounded_and_unbounded_values_are_incomparable() {
    let b = Budgets::new(2.0, 2.0).unwrap();
    // Capping hurts the camp whose influence is concentrated on one node.
    let net = isolated_pair([0.3, 0.3], [0.5, 0.0]);
    let u = fundamental_game(&net, b, false).unwrap().value;
    let c = fundamental_game(&net, b, true).unwrap().value;
    assert!((u + 0.4).abs() < 1e-12 && (c - 0.1).abs() < 1e-12);

    let net = isolated_pair([0.5, 0.0], [0.3, 0.3]);
    let u = fundamental_game(&net, b, false).unwrap().value;
    let c = fundamental_game(&net, b, true).unwrap().value;
    assert!((u - 0.4).abs() < 1e-12 && (c + 0.1).abs() < 1e-12);
}
