//! Greedy by single-vertex reward.
//!
//! Vertices leave a max-heap in decreasing reward order (ties: smaller row,
//! then smaller column). A vertex that fits the residual budget is added with
//! its whole row prefix; one that does not is dropped for good, since the cost
//! of reaching it can only grow as the walk grows.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{even_budget, Algorithm, Pick, SolverResult, Stopwatch};
use crate::aisle_graph::{AisleGraph, Budget, RouteSolution, Vertex};

#[derive(Debug, Clone, Copy)]
struct Entry {
    reward: f64,
    vertex: Vertex,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.reward
            .total_cmp(&other.reward)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

pub fn solve_gdyme(graph: &AisleGraph, budget: Budget) -> SolverResult {
    let clock = Stopwatch::start();
    let budget = even_budget(budget);
    let mut solution = RouteSolution::empty(graph.rows());
    let mut picks = Vec::new();

    // Zero-reward vertices cannot raise the reward and are left out of the pool.
    let mut heap: BinaryHeap<Entry> = graph
        .vertices()
        .map(|vertex| Entry {
            reward: graph.reward(vertex),
            vertex,
        })
        .filter(|e| e.reward > 0.0)
        .collect();

    while let Some(Entry { reward, vertex }) = heap.pop() {
        if solution.covers(vertex) {
            continue;
        }
        let marginal_cost = solution.marginal_cost(vertex);
        let accepted = solution.cost() + marginal_cost <= budget;
        if accepted {
            solution.extend_to(graph, vertex);
        }
        picks.push(Pick {
            vertex,
            accepted,
            key: reward,
            marginal_cost,
        });
    }

    SolverResult {
        algorithm: Algorithm::GdyMe,
        budget,
        solution,
        best_single: None,
        picks,
        runtime_ms: clock.elapsed_ms(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample_4x5;

    #[test]
    fn sample_trace() {
        let res = solve_gdyme(&sample_4x5(), 16);
        assert_eq!(res.reward(), 30.0);
        let accepted: Vec<_> = res
            .picks
            .iter()
            .filter(|p| p.accepted)
            .map(|p| p.vertex)
            .collect();
        assert_eq!(accepted, [Vertex::new(2, 4), Vertex::new(3, 4)]);
        assert_eq!(res.solution.depths(), &[1, 4, 4, 0]);
        assert_eq!(res.cost(), 16);
    }

    #[test]
    fn zero_budget() {
        let res = solve_gdyme(&sample_4x5(), 0);
        assert_eq!(res.reward(), 0.0);
        assert_eq!(res.cost(), 0);
    }

    #[test]
    fn full_visit_budget_collects_everything() {
        let res = solve_gdyme(&sample_4x5(), 38);
        assert_eq!(res.reward(), 58.0);
        assert!(res.cost() <= 38);
    }
}
