use campopt_core::oracle::finite_horizon_opinion;
use campopt_core::verify::{karate_network, random_network, KARATE_MAX_STEPS};
use campopt_core::{fundamental_game, iterate_dynamics, opinion_sum, steady_state, Budgets};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn inf_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn single_targets(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    x[0] = 5.0;
    y[33] = 5.0;
    (x, y)
}

#[test]
fn first_step_touches_only_invested_nodes() {
    let net = karate_network();
    let (x, y) = single_targets(net.n());
    let traj = iterate_dynamics(&net, &x, &y, 1, 1e-12).unwrap();
    let v1 = &traj.states[1].v;
    for i in 0..net.n() {
        if i != 0 && i != 33 {
            assert_eq!(v1[i], 0.0, "node {i}");
        }
    }
    assert!(v1[0] > 0.0 && v1[33] < 0.0);
}

#[test]
fn karate_converges_quickly() {
    let net = karate_network();
    let g = fundamental_game(&net, Budgets::new(5.0, 5.0).unwrap(), false).unwrap();
    let traj = iterate_dynamics(&net, &g.x, &g.y, 200, 1e-4).unwrap();
    let steps = traj.converged_at.expect("converges");
    assert!(steps <= KARATE_MAX_STEPS, "{steps} steps");
}

#[test]
fn scalar_loop_agrees_with_vectorized_path() {
    let net = karate_network();
    let (x, y) = single_targets(net.n());
    let traj = iterate_dynamics(&net, &x, &y, 50, 0.0).unwrap();
    let scalar = finite_horizon_opinion(&net, &x, &y, 50);
    assert!(inf_gap(&traj.last().v, &scalar) <= 1e-12);
    let ss = steady_state(&net, &x, &y).unwrap();
    assert!(inf_gap(&scalar, &ss.v) <= 1e-8);
}

#[test]
fn opinions_stay_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.random_range(2..=20);
        let net = random_network(&mut rng, n, true);
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let traj = iterate_dynamics(&net, &x, &y, 60, 0.0).unwrap();
        for s in &traj.states {
            assert!(s.v.iter().all(|v| v.abs() <= 1.0 + 1e-12));
        }
    }
}

#[test]
fn increments_decay_geometrically() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let n = rng.random_range(2..=30);
        let net = random_network(&mut rng, n, true);
        let x = vec![0.5; n];
        let y = vec![0.25; n];
        let traj = iterate_dynamics(&net, &x, &y, 40, 0.0).unwrap();
        let rho = net.w().max_row_abs_sum();
        let first = inf_gap(&traj.states[1].v, &traj.states[0].v);
        for tau in 2..traj.states.len() {
            let d = inf_gap(&traj.states[tau].v, &traj.states[tau - 1].v);
            assert!(d <= rho.powi(tau as i32 - 1) * first + 1e-14);
        }
    }
}

#[test]
fn opinion_sum_is_bilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let net = random_network(&mut rng, 15, true);
    let x1: Vec<f64> = (0..15).map(|_| rng.random::<f64>()).collect();
    let x2: Vec<f64> = (0..15).map(|_| rng.random::<f64>()).collect();
    let y: Vec<f64> = (0..15).map(|_| rng.random::<f64>()).collect();
    let (a, b) = (0.7, 1.9);
    let mix: Vec<f64> = x1.iter().zip(&x2).map(|(p, q)| a * p + b * q).collect();
    let lhs = opinion_sum(&net, &mix, &y).unwrap();
    let rhs = a * opinion_sum(&net, &x1, &y).unwrap() + b * opinion_sum(&net, &x2, &y).unwrap()
        - (a + b - 1.0) * opinion_sum(&net, &[0.0; 15], &y).unwrap();
    assert!((lhs - rhs).abs() < 1e-10);
}

#[test]
fn zero_investment_and_bias_gives_zero_trajectory() {
    let net = karate_network();
    let z = vec![0.0; net.n()];
    let traj = iterate_dynamics(&net, &z, &z, 10, 1e-4).unwrap();
    assert!(traj.states.iter().all(|s| s.v.iter().all(|&v| v == 0.0)));
}
