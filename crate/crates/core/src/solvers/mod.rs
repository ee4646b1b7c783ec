//! Exact and greedy solvers for budgeted reward collection on aisle-graphs.
//!
//! Every solver is a pure function of `(graph, budget)`. Budgets are walk
//! lengths; cycle costs are always even, so odd budgets are floored to the
//! next even value before solving.

mod apx;
mod brute;
mod gdymc;
mod gdyme;
mod optsa;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::aisle_graph::{AisleGraph, Budget, RouteSolution, Vertex};

pub use apx::{solve_apxmrc, solve_apxmre, RatioIndex, RatioNumerator};
pub use brute::{brute_force_frontier, solve_brute_force, BRUTE_FORCE_LOG2_LIMIT};
pub use gdymc::solve_gdymc;
pub use gdyme::solve_gdyme;
pub use optsa::{solve_optsa, DpTables};

/// `(1 - 1/e) / 2`, the worst-case ratio guaranteed by the ratio-greedy solvers.
pub const APPROX_RATIO: f64 = 0.5 * (1.0 - 1.0 / std::f64::consts::E);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("instance A({m},{n}) is too large for exhaustive enumeration (m*log2(n+1) = {work:.2} > {limit})")]
    TooLargeForBruteForce {
        m: usize,
        n: usize,
        work: f64,
        limit: f64,
    },
    #[error("unknown algorithm '{0}' (expected one of optsa, gdyme, gdymc, apxmre, apxmrc)")]
    UnknownAlgorithm(String),
}

/// Solver tags in their canonical reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    OptSa,
    GdyMe,
    GdyMc,
    ApxMre,
    ApxMrc,
    BruteForce,
}

impl Algorithm {
    /// The five solvers that take part in benchmark sweeps.
    pub const BENCHMARKED: [Algorithm; 5] = [
        Algorithm::OptSa,
        Algorithm::GdyMe,
        Algorithm::GdyMc,
        Algorithm::ApxMre,
        Algorithm::ApxMrc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::OptSa => "optsa",
            Algorithm::GdyMe => "gdyme",
            Algorithm::GdyMc => "gdymc",
            Algorithm::ApxMre => "apxmre",
            Algorithm::ApxMrc => "apxmrc",
            Algorithm::BruteForce => "brute",
        }
    }

    pub fn solve(self, graph: &AisleGraph, budget: Budget) -> Result<SolverResult, SolverError> {
        match self {
            Algorithm::OptSa => Ok(solve_optsa(graph, budget).0),
            Algorithm::GdyMe => Ok(solve_gdyme(graph, budget)),
            Algorithm::GdyMc => Ok(solve_gdymc(graph, budget)),
            Algorithm::ApxMre => Ok(solve_apxmre(graph, budget)),
            Algorithm::ApxMrc => Ok(solve_apxmrc(graph, budget)),
            Algorithm::BruteForce => solve_brute_force(graph, budget),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "optsa" => Ok(Algorithm::OptSa),
            "gdyme" => Ok(Algorithm::GdyMe),
            "gdymc" => Ok(Algorithm::GdyMc),
            "apxmre" => Ok(Algorithm::ApxMre),
            "apxmrc" => Ok(Algorithm::ApxMrc),
            "brute" | "brute-force" => Ok(Algorithm::BruteForce),
            _ => Err(SolverError::UnknownAlgorithm(s.to_string())),
        }
    }
}

/// One greedy selection: the candidate taken from the priority structure and
/// whether it fit in the residual budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pick {
    pub vertex: Vertex,
    pub accepted: bool,
    /// Priority the candidate was selected with (reward, cumulative reward or ratio).
    pub key: f64,
    pub marginal_cost: Budget,
}

/// The best single vertex reachable on its own, kept by the ratio-greedy solvers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestSingle {
    pub vertex: Vertex,
    pub vertex_reward: f64,
    /// Round trip from home to `vertex`, collecting its row prefix on the way.
    pub route: RouteSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub algorithm: Algorithm,
    /// Even budget actually used.
    pub budget: Budget,
    pub solution: RouteSolution,
    pub best_single: Option<BestSingle>,
    /// Greedy selection trace, empty for the exact solvers.
    pub picks: Vec<Pick>,
    pub runtime_ms: f64,
}

impl SolverResult {
    pub fn reward(&self) -> f64 {
        self.solution.reward()
    }

    pub fn cost(&self) -> Budget {
        self.solution.cost()
    }
}

/// Floors `budget` to an even value.
pub fn even_budget(budget: Budget) -> Budget {
    budget & !1
}

pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch(Instant::now())
    }

    pub(crate) fn elapsed_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}
