//! Acceptance checks that compare every solver against an independent
//! reference on seeded random instances. Each check returns a report instead
//! of panicking so callers can print a full summary.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{influence_vector, iterate_dynamics, opinion_sum, steady_state};
use crate::error::{Error, StrategyError};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::network::{
    build_network, generated_network, karate, weighted_class_weights, Budgets, ExtraWeight, Graph,
    Network,
};
use crate::oracle::{enumerate_integer_ccc, grid_search, grid_search_allocation};
use crate::robust::{box_sum_around, realized_value_params, robust_good_strategy};
use crate::strategies::adversary::{adversary_bounded, adversary_unbounded, deviation_from_scores};
use crate::strategies::basic::{fundamental_game, optimal_bounded, optimal_unbounded};
use crate::strategies::ccc::{ccc_maxmin, ccc_minmax};
use crate::strategies::concave::{concave_bounded_detail, concave_game, concave_unbounded};

pub const CONVERGENCE_TOL: f64 = 1e-8;
pub const CONVERGENCE_BUDGET: Duration = Duration::from_secs(5);
pub const DECOMPOSITION_TOL: f64 = 1e-9;
pub const WEIGHT_CLASS_TOL: f64 = 1e-10;
pub const GRID_RESOLUTION: f64 = 0.02;
pub const ORACLE_SLACK: f64 = 1e-9;
pub const RATIO_TOL: f64 = 1e-9;
pub const KKT_TOL: f64 = 1e-8;
pub const ADVERSARY_LP_TOL: f64 = 1e-8;
pub const STOPPING_TOL: f64 = 1e-9;
/// Floating-point agreement required between the CCC solver and the
/// enumeration, which evaluate the opinion sum along different paths.
pub const CCC_TOL: f64 = 1e-10;
pub const CCC_BUDGET: Duration = Duration::from_secs(60);
pub const COUPLING_TOL: f64 = 1e-12;
pub const ROBUST_CERTAINTY_TOL: f64 = 1e-8;
pub const ROBUST_GUARANTEE_TOL: f64 = 1e-7;
pub const ROBUST_SUPPORT_TOL: f64 = 1e-9;
pub const KARATE_BUDGET: Duration = Duration::from_secs(10);
pub const KARATE_TRAJECTORY_TOL: f64 = 1e-4;
pub const KARATE_MAX_STEPS: usize = 12;
pub const SCALE_BUDGET: Duration = Duration::from_secs(30);

/// Seed, extra-weight mass and budgets of the Karate experiments.
pub const KARATE_SEED: u64 = 42;
pub const KARATE_S: f64 = 0.5;
pub const KARATE_BUDGETS: (f64, f64) = (5.0, 5.0);

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CheckReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {} ({} ms) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms,
            self.detail
        )
    }
}

/// Collects failures while a check runs.
struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(self, id: u8, name: &'static str, start: Instant) -> CheckReport {
        let mut detail = self.notes.join("; ");
        if !self.failures.is_empty() {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            detail = format!(
                "{} failure(s): {}{}",
                self.failures.len(),
                shown.join(" | "),
                if detail.is_empty() {
                    String::new()
                } else {
                    format!("; {detail}")
                }
            );
        }
        CheckReport {
            id,
            name,
            passed: self.failures.is_empty(),
            detail,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

fn wrap(
    id: u8,
    name: &'static str,
    body: impl FnOnce(&mut Tally) -> Result<(), Error>,
) -> CheckReport {
    let start = Instant::now();
    let mut t = Tally::new();
    if let Err(e) = body(&mut t) {
        t.failures.push(format!("error {}: {e}", e.code()));
    }
    t.finish(id, name, start)
}

fn inf_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Random valid network on `n` nodes. Edge weights get random signs when
/// `signed` is set; biases are uniform in `[-1, 1]`.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, signed: bool) -> Network {
    let max_edges = n * n.saturating_sub(1) / 2;
    let m = if max_edges == 0 {
        0
    } else {
        rng.random_range(n.min(max_edges)..=max_edges.min(3 * n))
    };
    let g = Graph::random(n, m, rng.random());
    let s = rng.random_range(0.1..0.9);
    let mut extra = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for i in 0..n {
        let d = g.neighbors(i).len();
        let parts = [
            rng.random::<f64>(),
            rng.random::<f64>(),
            rng.random::<f64>(),
        ];
        let total: f64 = parts.iter().sum::<f64>().max(1e-12);
        let mass = if d == 0 { 1.0 } else { s };
        extra.push(ExtraWeight::new(
            mass * parts[0] / total,
            mass * parts[1] / total,
            mass * parts[2] / total,
        ));
        for &j in g.neighbors(i) {
            let sign = if signed && rng.random_bool(0.3) {
                -1.0
            } else {
                1.0
            };
            edges.push((i, j, sign * (1.0 - s) / d as f64));
        }
    }
    let bias: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    build_network(n, &edges, &extra, &bias).expect("generated rows are valid by construction")
}

pub fn karate_network() -> Network {
    let g = Graph::from_edge_list(&karate()).expect("embedded dataset is simple");
    generated_network(&g, KARATE_S, KARATE_SEED, None).expect("generated weights are valid")
}

fn karate_budgets() -> Budgets {
    Budgets::new(KARATE_BUDGETS.0, KARATE_BUDGETS.1).expect("constant budgets are valid")
}

fn fifty_networks() -> Vec<(Network, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..50)
        .map(|k| {
            let n = rng.random_range(2..=100);
            let net = random_network(&mut rng, n, k % 2 == 1);
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            (net, x, y)
        })
        .collect()
}

pub fn convergence() -> CheckReport {
    wrap(1, "convergence", |t| {
        let start = Instant::now();
        let mut worst: f64 = 0.0;
        for (k, (net, x, y)) in fifty_networks().iter().enumerate() {
            let traj = iterate_dynamics(net, x, y, 200, 0.0)?;
            let ss = steady_state(net, x, y)?;
            let gap = inf_gap(&traj.last().v, &ss.v);
            worst = worst.max(gap);
            t.check(gap <= CONVERGENCE_TOL, || {
                format!("instance {k}: gap {gap:e}")
            });
        }
        let el = start.elapsed();
        t.check(el < CONVERGENCE_BUDGET, || format!("took {el:?}"));
        t.note(format!("max gap {worst:.2e}"));
        Ok(())
    })
}

pub fn decomposition() -> CheckReport {
    wrap(2, "decomposition", |t| {
        let mut worst: f64 = 0.0;
        for (k, (net, x, y)) in fifty_networks().iter().enumerate() {
            let direct: f64 = steady_state(net, x, y)?.v.iter().sum();
            let closed = opinion_sum(net, x, y)?;
            let gap = (direct - closed).abs();
            worst = worst.max(gap);
            t.check(gap <= DECOMPOSITION_TOL, || {
                format!("instance {k}: gap {gap:e}")
            });
        }
        t.note(format!("max gap {worst:.2e}"));
        Ok(())
    })
}

pub fn weight_class() -> CheckReport {
    wrap(3, "weight class", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for k in 0..10 {
            let n = rng.random_range(2..=60);
            let m = rng.random_range(1..=(n * (n - 1) / 2).min(4 * n));
            let g = Graph::random(n, m, rng.random());
            for alpha in [1.0, 3.0, 7.0] {
                let net = weighted_class_weights(&g, alpha)?;
                let sg = net.good_scores()?;
                let sb = net.bad_scores()?;
                let gap = sg
                    .iter()
                    .chain(&sb)
                    .fold(0.0f64, |m, s| m.max((s - 1.0 / alpha).abs()));
                worst = worst.max(gap);
                t.check(gap <= WEIGHT_CLASS_TOL, || {
                    format!("graph {k}, alpha {alpha}: gap {gap:e}")
                });
            }
        }
        t.note(format!("max gap {worst:.2e}"));
        Ok(())
    })
}

/// Closed-form objective against the grid optimum: never below it, and above
/// it by at most `bound`.
fn against_grid(t: &mut Tally, label: &str, closed: f64, grid: f64, bound: f64) {
    t.check(
        closed >= grid - ORACLE_SLACK && closed - grid <= bound + ORACLE_SLACK,
        || format!("{label}: closed {closed} grid {grid} bound {bound}"),
    );
}

pub fn fundamental_oracle() -> CheckReport {
    wrap(4, "fundamental oracle", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = GRID_RESOLUTION;
        for k in 0..20 {
            let n = 2 + k % 3;
            let net = random_network(&mut rng, n, false);
            let kg = rng.random_range(0.5..2.0);
            let kb = rng.random_range(0.5..2.0);
            let sg = net.good_scores()?;
            let sb = net.bad_scores()?;
            for (who, s, budget) in [("good", &sg, kg), ("bad", &sb, kb)] {
                let lip = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let bound = lip * h * n as f64;
                let obj = |x: &[f64]| dot(s, x);
                let x = optimal_unbounded(s, budget)?;
                let (_, gv) = grid_search_allocation(obj, budget, None, n, h)?;
                against_grid(t, &format!("{k} {who} unbounded"), dot(s, &x), gv, bound);
                let x = optimal_bounded(s, budget, 1.0)?;
                let (_, gv) = grid_search_allocation(obj, budget, Some(1.0), n, h)?;
                against_grid(t, &format!("{k} {who} bounded"), dot(s, &x), gv, bound);
            }
            for bounded in [false, true] {
                let b = Budgets::new(kg, kb)?;
                let g = fundamental_game(&net, b, bounded)?;
                // Good moving first against the bad camp's best response, and
                // the reverse order, evaluated independently.
                let y_resp = if bounded {
                    optimal_bounded(&sb, kb, 1.0)?
                } else {
                    optimal_unbounded(&sb, kb)?
                };
                let x_resp = if bounded {
                    optimal_bounded(&sg, kg, 1.0)?
                } else {
                    optimal_unbounded(&sg, kg)?
                };
                let maxmin = opinion_sum(&net, &g.x, &y_resp)?;
                let minmax = opinion_sum(&net, &x_resp, &g.y)?;
                t.check(maxmin == minmax, || {
                    format!("{k}: maxmin {maxmin} != minmax {minmax}")
                });
                t.check(g.meta_f64("maxmin") == g.meta_f64("minmax"), || {
                    format!("{k}: reported maxmin and minmax differ")
                });
            }
        }
        Ok(())
    })
}

fn random_scores(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.3..1.0)).collect()
}

pub fn concave_kkt() -> CheckReport {
    wrap(5, "concave KKT", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ts = [1.5, 2.0, 10.0];
        let mut worst_ratio: f64 = 0.0;
        let mut worst_kkt: f64 = 0.0;
        for k in 0..20 {
            let tt = ts[k % 3];
            let p = tt / (tt - 1.0);
            let s = random_scores(&mut rng, 8);
            let budget = rng.random_range(0.5..6.0);

            let x = concave_unbounded(&s, budget, tt)?;
            let pos: Vec<usize> = (0..s.len()).filter(|&i| s[i] > 0.0).collect();
            if let Some(&j) = pos.first() {
                for &i in &pos {
                    let want = (s[i] / s[j]).powf(p);
                    let got = x[i] / x[j];
                    let rel = (got - want).abs() / want.max(1.0);
                    worst_ratio = worst_ratio.max(rel);
                    t.check(rel <= RATIO_TOL, || {
                        format!("{k}: ratio {i}/{j} off by {rel:e}")
                    });
                }
                let tight = (x.total() - budget).abs();
                t.check(tight <= 1e-9, || {
                    format!("{k}: unbounded budget slack {tight:e}")
                });
            }
            t.check((0..s.len()).all(|i| s[i] > 0.0 || x[i] == 0.0), || {
                format!("{k}: investment on a nonpositive score")
            });

            let sol = concave_bounded_detail(&s, budget, tt, 1.0)?;
            let xb = &sol.allocation;
            for i in 0..s.len() {
                if s[i] <= 0.0 {
                    t.check(xb[i] == 0.0, || format!("{k}: zero node {i} has {}", xb[i]));
                }
            }
            if let Some(tg) = sol.t_gamma {
                let gamma = tg / tt;
                for i in 0..s.len() {
                    let xi = xb[i];
                    if xi > 0.0 && xi < 1.0 {
                        let g = s[i] / (tt * xi.powf((tt - 1.0) / tt));
                        let gap = (g - gamma).abs();
                        worst_kkt = worst_kkt.max(gap);
                        t.check(gap <= KKT_TOL, || {
                            format!("{k}: interior {i} gamma gap {gap:e}")
                        });
                    } else if xi >= 1.0 {
                        t.check(s[i] >= tg - KKT_TOL, || {
                            format!("{k}: saturated {i} below threshold")
                        });
                    }
                }
                let tight = (xb.total() - budget).abs();
                t.check(tight <= 1e-9, || {
                    format!("{k}: bounded budget slack {tight:e}")
                });
            }

            // Grid comparison on three nodes.
            let s3 = &s[..3];
            let b3 = budget.min(2.0);
            let obj = |x: &[f64]| -> f64 {
                s3.iter()
                    .zip(x)
                    .map(|(si, xi)| si * xi.powf(1.0 / tt))
                    .sum()
            };
            let bound = s3.iter().map(|v| v.abs()).sum::<f64>() * GRID_RESOLUTION.powf(1.0 / tt);
            let xu = concave_unbounded(s3, b3, tt)?;
            let (_, gv) = grid_search_allocation(obj, b3, None, 3, GRID_RESOLUTION)?;
            against_grid(t, &format!("{k} unbounded grid"), obj(&xu), gv, bound);
            let xc = concave_bounded_detail(s3, b3, tt, 1.0)?.allocation;
            let (_, gv) = grid_search_allocation(obj, b3, Some(1.0), 3, GRID_RESOLUTION)?;
            against_grid(t, &format!("{k} bounded grid"), obj(&xc), gv, bound);
        }
        t.note(format!(
            "max ratio err {worst_ratio:.1e}, max gamma gap {worst_kkt:.1e}"
        ));
        Ok(())
    })
}

/// Minimal unbounded bad-camp total as an LP: min sum y s.t. s_b . y >= target.
fn adversary_lp(sb: &[f64], target: f64, cap: Option<f64>) -> Result<Option<f64>, Error> {
    let n = sb.len();
    let mut lp = LpProblem::new(n);
    lp.objective = vec![-1.0; n];
    lp.add_ge(
        sb.iter().enumerate().map(|(i, &v)| (i, v)).collect(),
        target,
    );
    if let Some(c) = cap {
        for i in 0..n {
            lp.add_le(vec![(i, 1.0)], c);
        }
    }
    let sol = solve_lp(&lp)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(-sol.value),
        _ => None,
    })
}

pub fn adversary() -> CheckReport {
    wrap(6, "adversary", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut worst: f64 = 0.0;
        for k in 0..10 {
            let n = rng.random_range(2..=8);
            let net = random_network(&mut rng, n, false);
            let kg = rng.random_range(0.2..3.0);
            let sb = net.bad_scores()?;
            let sg = net.good_scores()?;

            let out = adversary_unbounded(&net, kg)?;
            let total = out.meta_f64("bad_total").unwrap_or(f64::NAN);
            let target = out.meta_f64("target").unwrap_or(f64::NAN);
            let lp = adversary_lp(&sb, target, None)?;
            match lp {
                Some(v) => {
                    let gap = (v - total).abs();
                    worst = worst.max(gap);
                    t.check(gap <= ADVERSARY_LP_TOL, || {
                        format!("{k}: LP {v} vs formula {total}")
                    });
                }
                None => t.check(false, || format!("{k}: LP oracle failed")),
            }

            let target_b = net.bias_term()? + dot(&sg, &optimal_bounded(&sg, kg, 1.0)?);
            match adversary_bounded(&net, kg) {
                Ok(out) => {
                    let res = dot(&sb, &out.y) - target_b;
                    if target_b > 0.0 {
                        t.check((0.0..=STOPPING_TOL).contains(&res), || {
                            format!("{k}: stopping residual {res:e}")
                        });
                    }
                    if let Some(v) = adversary_lp(&sb, target_b, Some(1.0))? {
                        let gap = (v - out.y.total()).abs();
                        t.check(gap <= ADVERSARY_LP_TOL, || {
                            format!("{k}: bounded LP {v} vs greedy {}", out.y.total())
                        });
                    }
                }
                Err(StrategyError::AdversaryInfeasible { .. }) => {
                    let lp = adversary_lp(&sb, target_b, Some(1.0))?;
                    t.check(lp.is_none(), || {
                        format!("{k}: greedy infeasible but LP solved")
                    });
                }
                Err(e) => return Err(e.into()),
            }

            // Deviation strategy against the l2-ball grid on three nodes.
            let s: Vec<f64> = random_scores(&mut rng, 3);
            let xbar: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..0.5)).collect();
            let kdev = rng.random_range(0.1..1.0);
            let d = deviation_from_scores(&s, &xbar, kdev)?;
            let dev: f64 = d.x.iter().zip(&xbar).map(|(a, b)| (a - b).powi(2)).sum();
            t.check(dev <= kdev + 1e-9 && d.x.iter().all(|&v| v >= 0.0), || {
                format!("{k}: deviation infeasible ({dev} > {kdev})")
            });
            let upper: Vec<f64> = xbar.iter().map(|v| v + kdev.sqrt()).collect();
            let (_, gv) = grid_search(
                &[0.0; 3],
                &upper,
                GRID_RESOLUTION,
                |x| {
                    x.iter()
                        .zip(&xbar)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        <= kdev
                },
                |x| dot(&s, x),
            )?;
            let bound = 1.5 * dot(&s, &s).sqrt() * GRID_RESOLUTION * 3f64.sqrt();
            against_grid(t, &format!("{k} deviation"), dot(&s, &d.x), gv, bound);
        }
        t.note(format!("max LP gap {worst:.1e}"));
        Ok(())
    })
}

fn crafted_ccc() -> Network {
    build_network(
        2,
        &[],
        &[
            ExtraWeight::new(0.0, 0.5, 0.45),
            ExtraWeight::new(0.0, 0.4, 0.1),
        ],
        &[0.0, 0.0],
    )
    .expect("crafted instance is valid")
}

pub fn ccc_exactness() -> CheckReport {
    wrap(7, "CCC exactness", |t| {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut instances: Vec<(Network, Budgets)> = Vec::new();
        for k in 0..30 {
            let n = 2 + k % 5;
            let net = random_network(&mut rng, n, false);
            let kg = rng.random_range(0..=3) as f64;
            let kb = rng.random_range(0..=3) as f64;
            instances.push((net, Budgets::new(kg, kb)?));
        }
        instances.push((crafted_ccc(), Budgets::new(1.0, 1.0)?));
        let last = instances.len() - 1;
        for (k, (net, b)) in instances.iter().enumerate() {
            let mm = ccc_maxmin(net, *b)?;
            let mx = ccc_minmax(net, *b)?;
            let (emm, emx) = enumerate_integer_ccc(net, *b)?;
            t.check((mm.value - emm.value).abs() <= CCC_TOL, || {
                format!("{k}: maxmin {} vs enumeration {}", mm.value, emm.value)
            });
            t.check((mx.value - emx.value).abs() <= CCC_TOL, || {
                format!("{k}: minmax {} vs enumeration {}", mx.value, emx.value)
            });
            for g in [&mm, &mx] {
                let worst =
                    g.x.iter()
                        .zip(g.y.iter())
                        .fold(f64::NEG_INFINITY, |m, (a, b)| m.max(a + b));
                t.check(worst <= 1.0 + COUPLING_TOL, || {
                    format!("{k}: x + y = {worst}")
                });
            }
            t.check(mm.value >= mx.value - CCC_TOL, || {
                format!("{k}: maxmin {} < minmax {}", mm.value, mx.value)
            });
            if k == last {
                t.check(
                    (emm.value - 0.4).abs() <= CCC_TOL && (emx.value + 0.05).abs() <= CCC_TOL,
                    || format!("crafted enumeration gave {} / {}", emm.value, emx.value),
                );
                t.check(mm.value > mx.value, || "crafted instance not strict".into());
                t.note(format!(
                    "crafted maxmin {:.6} minmax {:.6}",
                    mm.value, mx.value
                ));
            }
        }
        let el = start.elapsed();
        t.check(el < CCC_BUDGET, || format!("took {el:?}"));
        Ok(())
    })
}

pub fn robust() -> CheckReport {
    wrap(8, "robust LP", |t| {
        let net = karate_network();
        let b = karate_budgets();
        let r = influence_vector(&net)?.r;
        let certainty = fundamental_game(&net, b, false)?.value;
        let mut prev = f64::INFINITY;
        let mut supports = Vec::new();
        for (k, eps) in [0.0, 0.2, 0.4, 0.6, 0.8].into_iter().enumerate() {
            let eps_o = if eps == 0.0 { 0.0 } else { 0.1 };
            let poly = box_sum_around(&net, eps, eps_o)?;
            let out = robust_good_strategy(&net, &poly, b)?;
            let rho = out.worst_case_value;
            if eps == 0.0 {
                let gap = (rho - certainty).abs();
                t.check(gap <= ROBUST_CERTAINTY_TOL, || {
                    format!("rho {rho} vs certainty {certainty}")
                });
            }
            t.check(rho <= prev + ROBUST_CERTAINTY_TOL, || {
                format!("rho increased at eps_l {eps}: {prev} -> {rho}")
            });
            prev = rho;
            let mut worst_margin = f64::INFINITY;
            for u in poly.sample_points(100, 100 + k as u64)? {
                let v = realized_value_params(&r, net.bias(), &u, &out.x, b.k_b);
                worst_margin = worst_margin.min(v - rho);
            }
            t.check(worst_margin >= -ROBUST_GUARANTEE_TOL, || {
                format!("eps_l {eps}: realized below rho by {:e}", -worst_margin)
            });
            supports.push(out.support(ROBUST_SUPPORT_TOL).len());
        }
        t.check(supports[0] == 1, || {
            format!("support at eps_l 0 is {}", supports[0])
        });
        t.check(supports[4] > 1, || {
            format!("support at eps_l 0.8 is {}", supports[4])
        });
        t.note(format!("supports {supports:?}"));
        Ok(())
    })
}

pub fn karate_qualitative() -> CheckReport {
    wrap(9, "Karate qualitative", |t| {
        let start = Instant::now();
        let net = karate_network();
        let b = karate_budgets();
        let base = fundamental_game(&net, b, false)?.value;
        let doubled = fundamental_game(&net, Budgets::new(2.0 * b.k_g, b.k_b)?, false)?.value;
        // "Markedly": the gain is at least half the magnitude of the
        // equal-budget value, or the sign flips from negative to positive.
        let gain = doubled - base;
        t.check(
            gain > 0.0 && (gain >= 0.5 * base.abs() || (base < 0.0 && doubled > 0.0)),
            || format!("doubling k_g moved the sum {base} -> {doubled}"),
        );
        let x2 = concave_game(&net, b, 2.0, false)?;
        let x10 = concave_game(&net, b, 10.0, false)?;
        let m2 = x2.x.iter().copied().fold(0.0, f64::max);
        let m10 = x10.x.iter().copied().fold(0.0, f64::max);
        t.check(m10 < m2, || {
            format!("max investment t=10 {m10} vs t=2 {m2}")
        });
        let g = fundamental_game(&net, b, false)?;
        let traj = iterate_dynamics(&net, &g.x, &g.y, 200, KARATE_TRAJECTORY_TOL)?;
        match traj.converged_at {
            Some(s) => {
                t.check(s <= KARATE_MAX_STEPS, || {
                    format!("converged after {s} steps")
                });
                t.note(format!("converged in {s} steps"));
            }
            None => t.check(false, || "trajectory did not converge".into()),
        }
        let el = start.elapsed();
        t.check(el < KARATE_BUDGET, || format!("took {el:?}"));
        t.note(format!(
            "value {base:.4} -> {doubled:.4}; max x {m2:.3} (t=2) vs {m10:.3} (t=10)"
        ));
        Ok(())
    })
}

/// NetHEPT-sized synthetic graph.
pub const SCALE_NODES: usize = 15_233;
pub const SCALE_EDGES: usize = 31_376;

pub fn scale() -> CheckReport {
    wrap(10, "scale smoke test", |t| {
        let g = Graph::random(SCALE_NODES, SCALE_EDGES, 10);
        let net = generated_network(&g, KARATE_S, 10, None)?;
        let start = Instant::now();
        let r = influence_vector(&net)?;
        let game = fundamental_game(&net, karate_budgets(), false)?;
        let el = start.elapsed();
        t.check(el < SCALE_BUDGET, || format!("took {el:?}"));
        let min_r = r.iter().copied().fold(f64::INFINITY, f64::min);
        t.check(min_r >= 1.0, || format!("min r {min_r}"));
        t.check(game.value.is_finite(), || "non-finite value".into());
        t.note(format!("solve {el:?} via {:?}, min r {min_r:.3}", r.method));
        Ok(())
    })
}

/// Named groups of checks for the command line.
pub const SUITES: &[&str] = &[
    "all",
    "dynamics",
    "weight-class",
    "fundamental",
    "concave",
    "adversary",
    "ccc",
    "robust",
    "karate",
    "scale",
];

pub fn run_suite(name: &str) -> Option<Vec<CheckReport>> {
    let checks: Vec<fn() -> CheckReport> = match name {
        "all" => vec![
            convergence,
            decomposition,
            weight_class,
            fundamental_oracle,
            concave_kkt,
            adversary,
            ccc_exactness,
            robust,
            karate_qualitative,
            scale,
        ],
        "dynamics" => vec![convergence, decomposition],
        "weight-class" => vec![weight_class],
        "fundamental" => vec![fundamental_oracle],
        "concave" => vec![concave_kkt],
        "adversary" => vec![adversary],
        "ccc" => vec![ccc_exactness],
        "robust" => vec![robust],
        "karate" => vec![karate_qualitative],
        "scale" => vec![scale],
        _ => return None,
    };
    Some(checks.into_iter().map(|c| c()).collect())
}
