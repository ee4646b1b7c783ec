//! Reward-maximizing closed walks on single-access aisle-graphs.
//!
//! A robot starts at the entrance of the first aisle, may travel at most a
//! fixed budget, and collects the reward of every vertex it passes. This crate
//! provides the shared cost model ([`aisle_graph`]), an exact dynamic program
//! and four greedy solvers ([`solvers`]), instance generators and readers
//! ([`instances`]), and the budget-sweep harness behind the `oasp` CLI
//! ([`bench`]).
//!
//! ```
//! use oasp::fixtures::sample_4x5;
//! use oasp::solvers::{solve_optsa, solve_apxmrc};
//!
//! let graph = sample_4x5();
//! let (exact, _tables) = solve_optsa(&graph, 16);
//! assert_eq!(exact.reward(), 32.0);
//! assert_eq!(solve_apxmrc(&graph, 16).reward(), 32.0);
//! ```

pub mod aisle_graph;
pub mod bench;
pub mod cli;
pub mod fixtures;
pub mod instances;
pub mod solvers;

pub use aisle_graph::{AisleGraph, Budget, GraphError, RouteSolution, Vertex};
pub use solvers::{Algorithm, SolverResult};
