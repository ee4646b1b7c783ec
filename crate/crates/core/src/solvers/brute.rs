//! Exhaustive enumeration of depth profiles, used as the ground-truth oracle.
//!
//! Costs and rewards are computed here from first principles (tree size and
//! per-vertex sums) rather than through the shared cost algebra.

use super::{even_budget, Algorithm, SolverError, SolverResult, Stopwatch};
use crate::aisle_graph::{AisleGraph, Budget, RouteSolution};

/// Largest `m * log2(n + 1)` accepted by the enumeration guard.
pub const BRUTE_FORCE_LOG2_LIMIT: f64 = 30.0;

fn check_guard(graph: &AisleGraph) -> Result<(), SolverError> {
    let (m, n) = (graph.rows(), graph.cols());
    let work = m as f64 * ((n + 1) as f64).log2();
    if work > BRUTE_FORCE_LOG2_LIMIT {
        return Err(SolverError::TooLargeForBruteForce {
            m,
            n,
            work,
            limit: BRUTE_FORCE_LOG2_LIMIT,
        });
    }
    Ok(())
}

/// Calls `visit(depths, cost, reward)` for every canonical profile: rows
/// `1..=k` explored to depths in `1..=n`, the rest untouched, for every `k`.
fn for_each_profile(graph: &AisleGraph, mut visit: impl FnMut(&[usize], Budget, f64)) {
    let (m, n) = (graph.rows(), graph.cols());
    let mut depths = vec![0usize; m];
    visit(&depths, 0, 0.0);
    for k in 1..=m {
        depths[..k].fill(1);
        loop {
            let tree_size: usize = depths[..k].iter().sum();
            let cost = 2 * (tree_size - 1) as Budget;
            let reward: f64 = depths[..k]
                .iter()
                .enumerate()
                .map(|(i, &d)| graph.row_rewards(i + 1)[..d].iter().sum::<f64>())
                .sum();
            visit(&depths, cost, reward);

            // odometer over depths[..k], last row fastest
            let mut pos = k;
            let advanced = loop {
                if pos == 0 {
                    break false;
                }
                pos -= 1;
                if depths[pos] < n {
                    depths[pos] += 1;
                    depths[pos + 1..k].fill(1);
                    break true;
                }
            };
            if !advanced {
                break;
            }
        }
        depths[..k].fill(0);
    }
}

/// Best feasible profile; equal rewards resolve to the lexicographically smallest depth vector.
pub fn solve_brute_force(graph: &AisleGraph, budget: Budget) -> Result<SolverResult, SolverError> {
    check_guard(graph)?;
    let clock = Stopwatch::start();
    let budget = even_budget(budget);
    let mut best: (f64, Vec<usize>) = (f64::NEG_INFINITY, Vec::new());
    for_each_profile(graph, |depths, cost, reward| {
        if cost > budget {
            return;
        }
        if reward > best.0 || (reward == best.0 && depths < best.1.as_slice()) {
            best = (reward, depths.to_vec());
        }
    });
    let solution =
        RouteSolution::from_depths(graph, &best.1).expect("enumerated depths are in range");
    Ok(SolverResult {
        algorithm: Algorithm::BruteForce,
        budget,
        solution,
        best_single: None,
        picks: Vec::new(),
        runtime_ms: clock.elapsed_ms(),
    })
}

/// Optimal reward for every budget `2b`, `b = 0..=half_budget`, in one enumeration.
pub fn brute_force_frontier(
    graph: &AisleGraph,
    half_budget: usize,
) -> Result<Vec<f64>, SolverError> {
    check_guard(graph)?;
    let mut best = vec![0.0f64; half_budget + 1];
    for_each_profile(graph, |_, cost, reward| {
        let slot = (cost / 2) as usize;
        if slot <= half_budget && reward > best[slot] {
            best[slot] = reward;
        }
    });
    for b in 1..=half_budget {
        best[b] = best[b].max(best[b - 1]);
    }
    Ok(best)
}
