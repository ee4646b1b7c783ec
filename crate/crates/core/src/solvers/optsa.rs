//! Exact dynamic program over (row, half-budget) states.
//!
//! `r[i][b]` is the best reward of a walk that reaches row `i` exactly and
//! costs at most `2b`; `q[i][b]` is the last column it explores in row `i`.
//! Row 1 is a pure prefix: `r[1][b] = t[1][min(b + 1, n)]`. Every later row
//! pays two units to step down from row `i - 1` plus `2(j - 1)` to explore
//! up to column `j`:
//!
//! ```text
//! r[i][b] = max_{1 <= j <= min(b - i + 2, n)} r[i-1][b-j] + t[i][j]   (b >= i - 1)
//! r[i][b] = -inf                                                       (b <  i - 1)
//! ```
//!
//! The optimum for budget `2b` is the maximum of column `b` over all rows.

use super::{even_budget, Algorithm, SolverResult, Stopwatch};
use crate::aisle_graph::{AisleGraph, Budget, RouteSolution};

/// The reward table `r` and backtracking table `q`, both `m x (B/2 + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpTables {
    m: usize,
    width: usize,
    r: Vec<f64>,
    q: Vec<u32>,
}

impl DpTables {
    pub fn rows(&self) -> usize {
        self.m
    }

    /// Largest half-budget `b` covered by the tables.
    pub fn max_half_budget(&self) -> usize {
        self.width - 1
    }

    /// Best reward reaching row `row` (1-based) with budget `2b`; `-inf` if unreachable.
    pub fn reward(&self, row: usize, b: usize) -> f64 {
        self.r[(row - 1) * self.width + b]
    }

    /// Column realizing [`DpTables::reward`], `None` for unreachable cells.
    pub fn column(&self, row: usize, b: usize) -> Option<usize> {
        match self.q[(row - 1) * self.width + b] {
            0 => None,
            j => Some(j as usize),
        }
    }

    pub fn reward_row(&self, row: usize) -> &[f64] {
        &self.r[(row - 1) * self.width..row * self.width]
    }

    /// Optimal reward for budget `2b`: the best entry of column `b`.
    pub fn best_reward(&self, b: usize) -> f64 {
        self.best_row(b).1
    }

    /// Deepest-row choice for column `b`; the smallest row wins ties.
    fn best_row(&self, b: usize) -> (usize, f64) {
        let mut best = (1, self.reward(1, b));
        for row in 2..=self.m {
            let value = self.reward(row, b);
            if value > best.1 {
                best = (row, value);
            }
        }
        best
    }

    /// Depth profile of an optimal walk with budget `2b`, traced back through `q`.
    pub fn reconstruct(&self, b: usize) -> Vec<usize> {
        let mut depths = vec![0; self.m];
        let (last, _) = self.best_row(b);
        let mut remaining = b;
        for row in (1..=last).rev() {
            let j = self
                .column(row, remaining)
                .expect("backtracking only visits reachable cells");
            depths[row - 1] = j;
            if row > 1 {
                remaining -= j;
            }
        }
        depths
    }
}

fn build_tables(graph: &AisleGraph, half_budget: usize) -> DpTables {
    let (m, n) = (graph.rows(), graph.cols());
    let width = half_budget + 1;
    let t = graph.cumulative();
    let mut r = vec![f64::NEG_INFINITY; m * width];
    let mut q = vec![0u32; m * width];

    for b in 0..width {
        let j = (b + 1).min(n);
        r[b] = t.get(1, j);
        q[b] = j as u32;
    }

    for i in 2..=m {
        let (done, rest) = r.split_at_mut((i - 1) * width);
        let prev = &done[(i - 2) * width..];
        let cur = &mut rest[..width];
        let cur_q = &mut q[(i - 1) * width..i * width];
        let row_t = t.row(i);
        for b in (i - 1)..width {
            let j_max = (b + 2 - i).min(n);
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for j in 1..=j_max {
                let value = prev[b - j] + row_t[j - 1];
                if value > best {
                    best = value;
                    arg = j;
                }
            }
            cur[b] = best;
            cur_q[b] = arg as u32;
        }
    }

    DpTables { m, width, r, q }
}

/// Optimal walk for `budget` together with the filled tables.
pub fn solve_optsa(graph: &AisleGraph, budget: Budget) -> (SolverResult, DpTables) {
    let clock = Stopwatch::start();
    let budget = even_budget(budget);
    let half = (budget / 2) as usize;
    let tables = build_tables(graph, half);
    let depths = tables.reconstruct(half);
    let solution = RouteSolution::from_depths(graph, &depths).expect("DP depths are in range");
    debug_assert!(solution.cost() <= budget);
    debug_assert!(
        (solution.reward() - tables.best_reward(half)).abs() <= 1e-9 * (1.0 + solution.reward())
    );
    let result = SolverResult {
        algorithm: Algorithm::OptSa,
        budget,
        solution,
        best_single: None,
        picks: Vec::new(),
        runtime_ms: clock.elapsed_ms(),
    };
    (result, tables)
}
