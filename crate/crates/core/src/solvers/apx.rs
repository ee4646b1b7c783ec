//! Ratio-greedy solvers with the best-single-vertex fallback.
//!
//! The greedy walk repeatedly takes the live vertex with the largest ratio of
//! gain to marginal cost. The gain is the vertex reward itself (`apxmre`) or
//! the cumulative reward still missing from its row prefix (`apxmrc`). A
//! selection that fits the residual budget is added with its row prefix; one
//! that does not is discarded permanently. The result is the better of this
//! walk and the round trip to the single most rewarding reachable vertex,
//! which together guarantee `(1 - 1/e) / 2` of the optimum.
//!
//! Ratios for a row not yet reached depend on the vertical offset
//! `d = i - i_max`, and for an explored row on its current prefix `p`:
//!
//! ```text
//! unexplored row:  gain(i, j) / (2(j - 1) + 2d)
//! explored row:    gain(i, j) / (2(j - p))        for j > p
//! ```
//!
//! [`RatioIndex`] evaluates these entries on demand and caches the best live
//! candidate per row. A row is rescanned only when its prefix, its offset, or
//! its set of discarded vertices changes.

use super::{even_budget, Algorithm, BestSingle, Pick, SolverResult, Stopwatch};
use crate::aisle_graph::{AisleGraph, Budget, RouteSolution, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioNumerator {
    /// Reward of the selected vertex alone.
    Element,
    /// Reward of the selected vertex and the unvisited part of its row prefix.
    Cumulative,
}

#[derive(Debug, Clone)]
pub struct RatioIndex<'g> {
    graph: &'g AisleGraph,
    numerator: RatioNumerator,
    discarded: Vec<bool>,
    /// Best live `(ratio, column)` of each row; ties go to the smaller column.
    live_max: Vec<Option<(f64, usize)>>,
}

impl<'g> RatioIndex<'g> {
    pub fn new(graph: &'g AisleGraph, numerator: RatioNumerator) -> Self {
        RatioIndex {
            graph,
            numerator,
            discarded: vec![false; graph.rows() * graph.cols()],
            live_max: vec![None; graph.rows()],
        }
    }

    fn gain_from(&self, row: usize, prefix: usize, col: usize) -> f64 {
        match self.numerator {
            RatioNumerator::Element => self.graph.reward(Vertex::new(row, col)),
            RatioNumerator::Cumulative => {
                let t = self.graph.cumulative();
                t.get(row, col) - t.get(row, prefix)
            }
        }
    }

    /// Ratio of `v_{row,col}` for a row entered from `offset` rows above it and
    /// explored only through its interconnect vertex. `-inf` when the cost is 0.
    pub fn entry(&self, row: usize, offset: usize, col: usize) -> f64 {
        let cost = 2 * (col - 1) + 2 * offset;
        if cost == 0 {
            f64::NEG_INFINITY
        } else {
            self.gain_from(row, 1, col) / cost as f64
        }
    }

    /// Ratio of `v_{row,col}` once the row has been explored up to `prefix`.
    pub fn refreshed_entry(&self, row: usize, prefix: usize, col: usize) -> f64 {
        if col <= prefix {
            f64::NEG_INFINITY
        } else {
            self.gain_from(row, prefix, col) / (2 * (col - prefix)) as f64
        }
    }

    /// All ratios of `row` at vertical offset `offset`, columns `1..=n`.
    pub fn offset_row(&self, row: usize, offset: usize) -> Vec<f64> {
        (1..=self.graph.cols())
            .map(|col| self.entry(row, offset, col))
            .collect()
    }

    pub fn is_discarded(&self, v: Vertex) -> bool {
        self.discarded[(v.row - 1) * self.graph.cols() + v.col - 1]
    }

    fn discard(&mut self, v: Vertex) {
        let n = self.graph.cols();
        self.discarded[(v.row - 1) * n + v.col - 1] = true;
    }

    /// Current ratio of `v` against `solution`, or `None` when `v` is not a live
    /// candidate (already visited, discarded, or without gain).
    pub fn ratio(&self, solution: &RouteSolution, v: Vertex) -> Option<f64> {
        if solution.covers(v) || self.is_discarded(v) {
            return None;
        }
        let explored = solution.explored(v.row);
        let reached = solution.i_max().max(1);
        let gain = self.gain_from(v.row, explored.max(1), v.col);
        if gain <= 0.0 {
            return None;
        }
        let ratio = if v.row > reached {
            self.entry(v.row, v.row - reached, v.col)
        } else if explored <= 1 {
            self.entry(v.row, 0, v.col)
        } else {
            self.refreshed_entry(v.row, explored, v.col)
        };
        debug_assert_eq!(ratio, gain / solution.marginal_cost(v) as f64);
        Some(ratio)
    }

    fn rescan(&mut self, row: usize, solution: &RouteSolution) {
        let mut best: Option<(f64, usize)> = None;
        for col in solution.explored(row) + 1..=self.graph.cols() {
            if let Some(r) = self.ratio(solution, Vertex::new(row, col)) {
                if best.is_none_or(|(b, _)| r > b) {
                    best = Some((r, col));
                }
            }
        }
        self.live_max[row - 1] = best;
    }

    fn rescan_rows(&mut self, rows: std::ops::RangeInclusive<usize>, solution: &RouteSolution) {
        for row in rows {
            self.rescan(row, solution);
        }
    }

    /// Live candidate with the largest ratio; ties go to the smaller row, then column.
    pub fn best(&self) -> Option<(Vertex, f64)> {
        let mut best: Option<(Vertex, f64)> = None;
        for (i, cand) in self.live_max.iter().enumerate() {
            if let Some((ratio, col)) = *cand {
                if best.is_none_or(|(_, b)| ratio > b) {
                    best = Some((Vertex::new(i + 1, col), ratio));
                }
            }
        }
        best
    }
}

/// Highest-reward vertex whose round trip fits the budget (ties: row-major order).
fn best_single(graph: &AisleGraph, budget: Budget) -> Option<BestSingle> {
    let mut best: Option<(Vertex, f64)> = None;
    for v in graph.vertices() {
        let reward = graph.reward(v);
        if reward > 0.0 && v.round_trip() <= budget && best.is_none_or(|(_, r)| reward > r) {
            best = Some((v, reward));
        }
    }
    best.map(|(vertex, vertex_reward)| {
        let mut route = RouteSolution::empty(graph.rows());
        route.extend_to(graph, vertex);
        BestSingle {
            vertex,
            vertex_reward,
            route,
        }
    })
}

fn greedy_walk(
    graph: &AisleGraph,
    budget: Budget,
    numerator: RatioNumerator,
) -> (RouteSolution, Vec<Pick>) {
    let m = graph.rows();
    let mut solution = RouteSolution::empty(m);
    let mut index = RatioIndex::new(graph, numerator);
    let mut picks = Vec::new();
    index.rescan_rows(1..=m, &solution);

    while let Some((vertex, ratio)) = index.best() {
        let marginal_cost = solution.marginal_cost(vertex);
        let accepted = solution.cost() + marginal_cost <= budget;
        if accepted {
            let reached = solution.i_max().max(1);
            solution.extend_to(graph, vertex);
            if vertex.row > reached {
                index.rescan_rows(reached + 1..=m, &solution);
            } else {
                index.rescan(vertex.row, &solution);
            }
        } else {
            index.discard(vertex);
            index.rescan(vertex.row, &solution);
        }
        picks.push(Pick {
            vertex,
            accepted,
            key: ratio,
            marginal_cost,
        });
    }

    if cfg!(debug_assertions) {
        for p in picks.iter().filter(|p| !p.accepted) {
            assert!(
                !solution.covers(p.vertex)
                    && solution.cost() + solution.marginal_cost(p.vertex) > budget,
                "discarded {} became reachable",
                p.vertex
            );
        }
    }
    (solution, picks)
}

fn solve_ratio_greedy(
    graph: &AisleGraph,
    budget: Budget,
    numerator: RatioNumerator,
    algorithm: Algorithm,
) -> SolverResult {
    let clock = Stopwatch::start();
    let budget = even_budget(budget);
    let single = best_single(graph, budget);
    let (walk, picks) = greedy_walk(graph, budget, numerator);
    let solution = match &single {
        Some(s) if s.route.reward() > walk.reward() => s.route.clone(),
        _ => walk,
    };
    SolverResult {
        algorithm,
        budget,
        solution,
        best_single: single,
        picks,
        runtime_ms: clock.elapsed_ms(),
    }
}

pub fn solve_apxmre(graph: &AisleGraph, budget: Budget) -> SolverResult {
    solve_ratio_greedy(graph, budget, RatioNumerator::Element, Algorithm::ApxMre)
}

pub fn solve_apxmrc(graph: &AisleGraph, budget: Budget) -> SolverResult {
    solve_ratio_greedy(graph, budget, RatioNumerator::Cumulative, Algorithm::ApxMrc)
}
