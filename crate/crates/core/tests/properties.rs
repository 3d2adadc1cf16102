use campopt_core::oracle::finite_horizon_opinion;
use campopt_core::verify::random_network;
use campopt_core::{
    ccc_maxmin, ccc_minmax, concave_bounded, concave_unbounded, generate_extra_weights,
    influence_vector, iterate_dynamics, opinion_sum, optimal_bounded, optimal_unbounded,
    steady_state, Budgets, Graph,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scores(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_allocations_respect_budget(s in scores(1..=12), k in 0.0f64..8.0) {
        let x = optimal_unbounded(&s, k).unwrap();
        prop_assert!(x.total() <= k + 1e-12);
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        let xb = optimal_bounded(&s, k, 1.0).unwrap();
        prop_assert!(xb.total() <= k + 1e-12);
        prop_assert!(xb.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn concave_budget_is_tight(s in scores(1..=10), k in 0.1f64..6.0, t in 1.1f64..20.0) {
        let x = concave_unbounded(&s, k, t).unwrap();
        if s.iter().any(|&v| v > 0.0) {
            prop_assert!((x.total() - k).abs() <= 1e-9 * (1.0 + k));
        } else {
            prop_assert_eq!(x.total(), 0.0);
        }
        let xb = concave_bounded(&s, k, t, 1.0).unwrap();
        let pos = s.iter().filter(|&&v| v > 0.0).count() as f64;
        prop_assert!((xb.total() - k.min(pos)).abs() <= 1e-9 * (1.0 + k));
        prop_assert!(xb.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
    }

    #[test]
    fn generated_weights_are_always_valid(seed in any::<u64>(), n in 2usize..40, s in 0.01f64..0.99) {
        let g = Graph::random(n, 2 * n, seed);
        let extra = generate_extra_weights(&g.degrees(), s, seed).unwrap();
        for (i, e) in extra.tuples.iter().enumerate() {
            let mass = e.self_weight + e.good_weight + e.bad_weight;
            let want = if g.degrees()[i] == 0 { 1.0 } else { s };
            prop_assert!((mass - want).abs() <= 1e-12);
        }
        prop_assert!(campopt_core::generated_network(&g, s, seed, None).is_ok());
    }

    #[test]
    fn nonnegative_networks_have_influence_at_least_one(seed in any::<u64>(), n in 2usize..30) {
        let net = random_network(&mut ChaCha8Rng::seed_from_u64(seed), n, false);
        let r = influence_vector(&net).unwrap();
        prop_assert!(r.iter().all(|&v| v >= 1.0 - 1e-12));
    }

    #[test]
    fn dynamics_paths_agree(seed in any::<u64>(), n in 2usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, n, true);
        let x = vec![0.3; n];
        let y = vec![0.6; n];
        let traj = iterate_dynamics(&net, &x, &y, 30, 0.0).unwrap();
        let scalar = finite_horizon_opinion(&net, &x, &y, 30);
        let gap = traj.last().v.iter().zip(&scalar).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(gap <= 1e-12);
        let total: f64 = steady_state(&net, &x, &y).unwrap().v.iter().sum();
        prop_assert!((total - opinion_sum(&net, &x, &y).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn ccc_invariants(seed in any::<u64>(), n in 2usize..12, kg in 0.0f64..5.0, kb in 0.0f64..5.0) {
        let net = random_network(&mut ChaCha8Rng::seed_from_u64(seed), n, false);
        let b = Budgets::new(kg, kb).unwrap();
        let mm = ccc_maxmin(&net, b).unwrap();
        let mx = ccc_minmax(&net, b).unwrap();
        prop_assert!(mm.value >= mx.value - 1e-10);
        for g in [&mm, &mx] {
            prop_assert!(g.x.iter().zip(g.y.iter()).all(|(a, c)| a + c <= 1.0 + 1e-12));
            prop_assert!(g.x.total() <= kg + 1e-9 && g.y.total() <= kb + 1e-9);
        }
    }
}
