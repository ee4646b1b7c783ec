//! Greedy by cumulative row reward.
//!
//! Each row keeps one candidate, initially its last column, keyed by the
//! cumulative reward `t[i][j]`. The best candidate is taken from a max-heap
//! (ties: smaller row). If it fits, the row prefix is added and the row is
//! retired; otherwise the row re-enters the heap one column to the left. A row
//! whose candidate has no reward left is retired.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{even_budget, Algorithm, Pick, SolverResult, Stopwatch};
use crate::aisle_graph::{AisleGraph, Budget, RouteSolution, Vertex};

#[derive(Debug, Clone, Copy)]
struct RowCandidate {
    cumulative: f64,
    vertex: Vertex,
}

impl PartialEq for RowCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RowCandidate {}

impl PartialOrd for RowCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RowCandidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cumulative
            .total_cmp(&other.cumulative)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

pub fn solve_gdymc(graph: &AisleGraph, budget: Budget) -> SolverResult {
    let clock = Stopwatch::start();
    let budget = even_budget(budget);
    let n = graph.cols();
    let t = graph.cumulative();
    let mut solution = RouteSolution::empty(graph.rows());
    let mut picks = Vec::new();

    let mut heap: BinaryHeap<RowCandidate> = (1..=graph.rows())
        .map(|row| RowCandidate {
            cumulative: t.get(row, n),
            vertex: Vertex::new(row, n),
        })
        .filter(|c| c.cumulative > 0.0)
        .collect();

    while let Some(RowCandidate { cumulative, vertex }) = heap.pop() {
        let marginal_cost = solution.marginal_cost(vertex);
        let accepted = solution.cost() + marginal_cost <= budget;
        picks.push(Pick {
            vertex,
            accepted,
            key: cumulative,
            marginal_cost,
        });
        if accepted {
            solution.extend_to(graph, vertex);
        } else if vertex.col > 1 {
            let left = Vertex::new(vertex.row, vertex.col - 1);
            let cumulative = t.get(left.row, left.col);
            if cumulative > 0.0 {
                heap.push(RowCandidate {
                    cumulative,
                    vertex: left,
                });
            }
        }
    }

    SolverResult {
        algorithm: Algorithm::GdyMc,
        budget,
        solution,
        best_single: None,
        picks,
        runtime_ms: clock.elapsed_ms(),
    }
}
