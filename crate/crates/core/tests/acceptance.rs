//! Acceptance suite. Prints one `PASS`/`FAIL`/`INFO` line per criterion and
//! exits non-zero if any hard criterion fails. Soft and timing criteria are
//! reported without affecting the exit status.

mod common;

use std::time::Instant;

use common::{all_profiles, even_budgets, graph, optimum_by_half_budget, random_grid, walk_cost};
use oasp::aisle_graph::route_cost;
use oasp::bench::{csv_string, run_sweep, zipf_batch, BudgetGrid, BudgetPoint, SweepConfig};
use oasp::fixtures::sample_4x5;
use oasp::instances::{generate_zipf, ZipfConfig};
use oasp::solvers::{solve_optsa, APPROX_RATIO};
use oasp::{AisleGraph, Algorithm, RouteSolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Kind {
    Hard,
    Soft,
    Timing,
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn trace_rewards() -> Outcome {
    let g = sample_4x5();
    let expected = [
        (Algorithm::OptSa, 32.0),
        (Algorithm::GdyMe, 30.0),
        (Algorithm::GdyMc, 32.0),
        (Algorithm::ApxMre, 25.0),
        (Algorithm::ApxMrc, 32.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (alg, want) in expected {
        let got = alg.solve(&g, 16).unwrap().reward();
        ok &= got == want;
        parts.push(format!("{alg}={got}"));
    }
    outcome(ok, parts.join(" "))
}

fn dp_tables() -> Outcome {
    const X: f64 = f64::NEG_INFINITY;
    let r = [
        [0.0, 3.0, 4.0, 8.0, 9.0, 9.0, 9.0, 9.0, 9.0],
        [X, 0.0, 3.0, 4.0, 11.0, 17.0, 20.0, 21.0, 25.0],
        [X, X, 0.0, 3.0, 10.0, 19.0, 28.0, 31.0, 32.0],
        [X, X, X, 0.0, 3.0, 10.0, 19.0, 28.0, 31.0],
    ];
    let q: [[u32; 9]; 4] = [
        [1, 2, 3, 4, 5, 5, 5, 5, 5],
        [0, 1, 1, 1, 4, 5, 5, 5, 5],
        [0, 0, 1, 1, 3, 4, 5, 5, 5],
        [0, 0, 0, 1, 1, 1, 1, 1, 1],
    ];
    let (_, tables) = solve_optsa(&sample_4x5(), 16);
    let mut mismatches = Vec::new();
    for i in 0..4 {
        for b in 0..9 {
            let got_r = tables.reward(i + 1, b);
            let got_q = tables.column(i + 1, b).map_or(0, |j| j as u32);
            if got_r != r[i][b] || got_q != q[i][b] {
                mismatches.push(format!("({},{b}) r={got_r} q={got_q}", i + 1));
            }
        }
    }
    if mismatches.is_empty() {
        outcome(true, "36/36 R cells and 36/36 Q cells match")
    } else {
        outcome(
            false,
            format!("mismatched cells: {}", mismatches.join(", ")),
        )
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checks = 0;
    for trial in 0..500 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let grid = random_grid(&mut rng, m, n, 20);
        let g = graph(&grid);
        let ceiling = g.sweep_ceiling();
        let best = optimum_by_half_budget(&grid, (ceiling / 2) as usize);
        let (_, tables) = solve_optsa(&g, ceiling);
        for b in even_budgets(ceiling) {
            let half = (b / 2) as usize;
            let res = Algorithm::OptSa.solve(&g, b).unwrap();
            checks += 1;
            if res.reward() != best[half]
                || tables.best_reward(half) != best[half]
                || res.cost() > b
            {
                return outcome(
                    false,
                    format!(
                        "trial {trial}, grid {grid:?}, budget {b}: optsa {} vs {}",
                        res.reward(),
                        best[half]
                    ),
                );
            }
        }
    }
    outcome(true, format!("500 instances, {checks} budgets, all equal"))
}

fn approximation_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for k in 0..200u64 {
        let theta = [0.0, 0.9, 1.8, 2.7][(k % 4) as usize];
        let (m, n) = (rng.gen_range(2..=12), rng.gen_range(2..=12));
        let g = generate_zipf(m, n, &ZipfConfig::new(theta, 1000 + k)).unwrap();
        let ceiling = g.sweep_ceiling();
        for s in 0..20u64 {
            let b = (s * ceiling / 19) & !1;
            let opt = Algorithm::OptSa.solve(&g, b).unwrap().reward();
            for alg in [Algorithm::ApxMre, Algorithm::ApxMrc] {
                let r = alg.solve(&g, b).unwrap().reward();
                if r < 0.3160 * opt {
                    violations += 1;
                }
                if opt > 0.0 {
                    worst = worst.min(r / opt);
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("4000 budgets, {violations} violations, worst ratio {worst:.4} (bound {APPROX_RATIO:.4})"),
    )
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

fn empirical_quality() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (t, theta) in [0.0, 0.9, 1.8, 2.7].into_iter().enumerate() {
        let batch = zipf_batch(30, 15, theta, 10, 500 + 100 * t as u64).unwrap();
        let config = SweepConfig {
            budgets: BudgetGrid::Spaced(50),
            algorithms: vec![Algorithm::OptSa, Algorithm::ApxMrc],
            parallelism: 0,
        };
        let report = run_sweep(&batch, &config).unwrap();
        let rhos: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.algorithm == Algorithm::ApxMrc && r.budget_pct >= 20.0)
            .filter_map(|r| r.rho)
            .collect();
        let med = median(rhos);
        ok &= med >= 0.80;
        parts.push(format!("theta={theta}: {med:.4}"));
    }
    outcome(
        ok,
        format!("median apxmrc rho for budgets >= 20%: {}", parts.join(", ")),
    )
}

fn cost_model() -> Outcome {
    let mut pairs = 0u64;
    for m in 1..=4 {
        for n in 1..=4 {
            let mut rng = ChaCha8Rng::seed_from_u64((m * 10 + n) as u64);
            let g = graph(&random_grid(&mut rng, m, n, 20));
            for depths in all_profiles(m, n) {
                let sol = RouteSolution::from_depths(&g, &depths).unwrap();
                let base = walk_cost(m, n, &depths);
                if sol.cost() != base {
                    return outcome(
                        false,
                        format!("A({m},{n}) {depths:?}: cost {} vs walk {base}", sol.cost()),
                    );
                }
                for v in g.vertices() {
                    let mut grown = depths.clone();
                    grown[v.row - 1] = grown[v.row - 1].max(v.col);
                    let fresh = RouteSolution::from_depths(&g, &grown)
                        .unwrap()
                        .recomputed_cost();
                    if sol.marginal_cost(v) != fresh - sol.cost()
                        || fresh != walk_cost(m, n, &grown)
                    {
                        return outcome(false, format!("A({m},{n}) {depths:?} + {v}"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let (m, n) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let depths: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=n)).collect();
        let g = AisleGraph::from_flat(m, n, vec![0.0; m * n]).unwrap();
        let cost = route_cost(&g, &depths).unwrap();
        if cost != walk_cost(m, n, &depths) || !cost.is_multiple_of(2) {
            return outcome(false, format!("A({m},{n}) {depths:?}: cost {cost}"));
        }
    }
    outcome(
        true,
        format!("{pairs} (solution, vertex) pairs and 10000 walk profiles agree, all costs even"),
    )
}

fn determinism() -> Outcome {
    let mut batch = zipf_batch(12, 10, 0.9, 5, 31).unwrap();
    batch.extend(zipf_batch(12, 10, 2.7, 5, 61).unwrap());
    let run = |parallelism| {
        let config = SweepConfig {
            budgets: BudgetGrid::Explicit(vec![
                BudgetPoint::Absolute(20),
                BudgetPoint::Percent(25.0),
                BudgetPoint::Percent(50.0),
                BudgetPoint::Percent(75.0),
                BudgetPoint::Percent(100.0),
            ]),
            algorithms: Algorithm::BENCHMARKED.to_vec(),
            parallelism,
        };
        csv_string(&run_sweep(&batch, &config).unwrap(), false)
    };
    let (a, b) = (run(1), run(8));
    outcome(
        a == b,
        format!(
            "{} CSV bytes, parallelism 1 vs 8 {}",
            a.len(),
            if a == b { "identical" } else { "differ" }
        ),
    )
}

fn performance() -> Outcome {
    let g = generate_zipf(100, 50, &ZipfConfig::new(0.9, 3)).unwrap();
    let budget = g.sweep_ceiling();
    let clock = Instant::now();
    Algorithm::OptSa.solve(&g, budget).unwrap();
    let optsa = clock.elapsed().as_secs_f64();
    let mut greedy = Vec::new();
    for alg in &Algorithm::BENCHMARKED[1..] {
        let clock = Instant::now();
        alg.solve(&g, budget).unwrap();
        greedy.push((alg.name(), clock.elapsed().as_secs_f64()));
    }
    let field = generate_zipf(274, 214, &ZipfConfig::new(0.9, 4)).unwrap();
    let batch = vec![oasp::bench::BenchInstance {
        id: "field".into(),
        tag: "timing".into(),
        graph: field,
    }];
    let config = SweepConfig {
        budgets: BudgetGrid::Spaced(50),
        algorithms: Algorithm::BENCHMARKED[1..].to_vec(),
        parallelism: 1,
    };
    let clock = Instant::now();
    run_sweep(&batch, &config).unwrap();
    let sweep = clock.elapsed().as_secs_f64();
    let ok = optsa < 10.0 && greedy.iter().all(|(_, t)| *t < 1.0) && sweep < 60.0;
    let greedy: Vec<String> = greedy.iter().map(|(a, t)| format!("{a} {t:.3}s")).collect();
    outcome(
        ok,
        format!(
            "A(100,50) B={budget}: optsa {optsa:.3}s, {}; A(274,214) 50-budget greedy sweep {sweep:.2}s",
            greedy.join(", ")
        ),
    )
}

type Criterion = (&'static str, Kind, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 sample-grid solver rewards", Kind::Hard, trace_rewards),
        ("2 dp table reproduction", Kind::Hard, dp_tables),
        ("3 oracle equivalence", Kind::Hard, oracle_equivalence),
        ("4 approximation bound", Kind::Hard, approximation_bound),
        ("5 empirical quality", Kind::Soft, empirical_quality),
        ("6 cost-model properties", Kind::Hard, cost_model),
        ("7 sweep determinism", Kind::Hard, determinism),
        ("8 performance smoke", Kind::Timing, performance),
    ];
    let mut failed = 0;
    for (name, kind, run) in criteria {
        let clock = Instant::now();
        let result = run();
        let secs = clock.elapsed().as_secs_f64();
        let label = match (&kind, result.ok) {
            (_, true) => "PASS",
            (Kind::Hard, false) => {
                failed += 1;
                "FAIL"
            }
            (Kind::Soft, false) => "FLAG",
            (Kind::Timing, false) => "SLOW",
        };
        let note = match kind {
            Kind::Hard => "",
            Kind::Soft => " [soft]",
            Kind::Timing => " [informational]",
        };
        println!(
            "{label} criterion {name}{note} ({secs:.2}s): {}",
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} hard criteria failed");
        std::process::exit(1);
    }
}
