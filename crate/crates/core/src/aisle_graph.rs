//! Single-access aisle-graphs and the cycle cost algebra shared by every solver.
//!
//! An aisle-graph `A(m, n)` has `m` rows of `n` vertices. Rows are connected to
//! each other only through column 1, and the home vertex is `(1, 1)`. Every
//! edge costs one budget unit per traversal, so a closed walk that explores a
//! set of vertices costs twice the number of edges of the subtree it spans.
//!
//! Rows and columns are 1-based in every public signature and file format.
//! Depth vectors are plain slices where index `i - 1` holds the depth of row `i`.

use serde::Serialize;
use thiserror::Error;

/// Budget units. Every edge traversal costs one unit.
pub type Budget = u64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("aisle-graph needs at least one row and one column, got {m}x{n}")]
    EmptyDimensions { m: usize, n: usize },
    #[error("reward grid has {actual} rows, expected {expected}")]
    RowCountMismatch { expected: usize, actual: usize },
    #[error("reward row {row} has {actual} columns, expected {expected}")]
    ColumnCountMismatch {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("reward at ({row},{col}) is not finite")]
    NonFiniteReward { row: usize, col: usize },
    #[error("reward at ({row},{col}) is negative: {value}")]
    NegativeReward { row: usize, col: usize, value: f64 },
    #[error("reward at ({row},1) must be 0 on the interconnect column, found {value}")]
    InterconnectReward { row: usize, value: f64 },
    #[error("depth vector has {actual} entries, expected {expected}")]
    DepthLength { expected: usize, actual: usize },
    #[error("depth {depth} of row {row} exceeds the column count {n}")]
    DepthOutOfRange { row: usize, depth: usize, n: usize },
    #[error("vertex ({row},{col}) lies outside A({m},{n})")]
    VertexOutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },
}

/// A vertex `v_{row,col}`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

impl Vertex {
    pub const HOME: Vertex = Vertex { row: 1, col: 1 };

    pub fn new(row: usize, col: usize) -> Self {
        Vertex { row, col }
    }

    /// Length of the closed walk from home to this vertex and back.
    pub fn round_trip(self) -> Budget {
        2 * ((self.col - 1) + (self.row - 1)) as Budget
    }
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v({},{})", self.row, self.col)
    }
}

/// Row-wise prefix sums of the reward grid: `t[i][j] = rewards[i][1] + ... + rewards[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeTable {
    n: usize,
    t: Vec<f64>,
}

impl CumulativeTable {
    fn build(m: usize, n: usize, rewards: &[f64]) -> Self {
        let mut t = Vec::with_capacity(m * n);
        for row in rewards.chunks_exact(n) {
            let mut acc = 0.0;
            for &r in row {
                acc += r;
                t.push(acc);
            }
        }
        CumulativeTable { n, t }
    }

    /// Cumulative reward of row `row` up to column `col`. Column 0 reads as 0.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        if col == 0 {
            0.0
        } else {
            self.t[(row - 1) * self.n + col - 1]
        }
    }

    #[inline]
    pub fn row_total(&self, row: usize) -> f64 {
        self.get(row, self.n)
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.t[(row - 1) * self.n..row * self.n]
    }
}

/// Validated, immutable aisle-graph `A(m, n)` with its vertex rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct AisleGraph {
    m: usize,
    n: usize,
    rewards: Vec<f64>,
    cumulative: CumulativeTable,
}

impl AisleGraph {
    /// Builds a graph from an `m x n` reward grid given row by row.
    pub fn new(m: usize, n: usize, rewards: Vec<Vec<f64>>) -> Result<Self, GraphError> {
        if m == 0 || n == 0 {
            return Err(GraphError::EmptyDimensions { m, n });
        }
        if rewards.len() != m {
            return Err(GraphError::RowCountMismatch {
                expected: m,
                actual: rewards.len(),
            });
        }
        let mut flat = Vec::with_capacity(m * n);
        for (i, row) in rewards.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::ColumnCountMismatch {
                    row: i + 1,
                    expected: n,
                    actual: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(m, n, flat)
    }

    /// Same as [`AisleGraph::new`] with a row-major flat grid.
    pub fn from_flat(m: usize, n: usize, rewards: Vec<f64>) -> Result<Self, GraphError> {
        if m == 0 || n == 0 {
            return Err(GraphError::EmptyDimensions { m, n });
        }
        if rewards.len() != m * n {
            return Err(GraphError::RowCountMismatch {
                expected: m,
                actual: rewards.len() / n,
            });
        }
        for (k, &value) in rewards.iter().enumerate() {
            let (row, col) = (k / n + 1, k % n + 1);
            if !value.is_finite() {
                return Err(GraphError::NonFiniteReward { row, col });
            }
            if value < 0.0 {
                return Err(GraphError::NegativeReward { row, col, value });
            }
            if col == 1 && value != 0.0 {
                return Err(GraphError::InterconnectReward { row, value });
            }
        }
        let cumulative = CumulativeTable::build(m, n, &rewards);
        Ok(AisleGraph {
            m,
            n,
            rewards,
            cumulative,
        })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn reward(&self, v: Vertex) -> f64 {
        self.rewards[(v.row - 1) * self.n + v.col - 1]
    }

    pub fn row_rewards(&self, row: usize) -> &[f64] {
        &self.rewards[(row - 1) * self.n..row * self.n]
    }

    /// Grid as nested rows, the layout used by the instance JSON.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rewards
            .chunks_exact(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn cumulative(&self) -> &CumulativeTable {
        &self.cumulative
    }

    pub fn total_reward(&self) -> f64 {
        (1..=self.m).map(|i| self.cumulative.row_total(i)).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.m).flat_map(move |row| (1..=self.n).map(move |col| Vertex { row, col }))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v.row == 0 || v.row > self.m || v.col == 0 || v.col > self.n {
            return Err(GraphError::VertexOutOfRange {
                row: v.row,
                col: v.col,
                m: self.m,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn check_depths(&self, depths: &[usize]) -> Result<(), GraphError> {
        if depths.len() != self.m {
            return Err(GraphError::DepthLength {
                expected: self.m,
                actual: depths.len(),
            });
        }
        if let Some((i, &depth)) = depths.iter().enumerate().find(|(_, &d)| d > self.n) {
            return Err(GraphError::DepthOutOfRange {
                row: i + 1,
                depth,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Exact cost of visiting every vertex: `2(mn - 1)`.
    pub fn full_visit_budget(&self) -> Budget {
        2 * (self.m * self.n - 1) as Budget
    }

    /// Upper end of the benchmark budget sweep, `2(mn + m)`.
    pub fn sweep_ceiling(&self) -> Budget {
        2 * (self.m * self.n + self.m) as Budget
    }

    /// The looser full-visit threshold `2nm + 2(m - 1)` used as a DP sizing bound.
    pub fn loose_full_visit_bound(&self) -> Budget {
        (2 * self.n * self.m + 2 * (self.m - 1)) as Budget
    }
}

/// Index of the deepest row with a non-zero depth, 0 if none.
fn last_entered_row(depths: &[usize]) -> usize {
    depths.iter().rposition(|&d| d >= 1).map_or(0, |i| i + 1)
}

fn cost_of_depths(depths: &[usize]) -> Budget {
    let i_max = last_entered_row(depths);
    if i_max == 0 {
        return 0;
    }
    let horizontal: usize = depths[..i_max].iter().map(|&d| d.max(1) - 1).sum();
    2 * (horizontal + i_max - 1) as Budget
}

fn reward_of_depths(graph: &AisleGraph, depths: &[usize]) -> f64 {
    let i_max = last_entered_row(depths);
    depths[..i_max]
        .iter()
        .enumerate()
        .map(|(i, &d)| graph.cumulative.get(i + 1, d.max(1)))
        .sum()
}

/// Cost of the minimal cycle from home that explores row `i` up to column `depths[i-1]`.
///
/// Rows above the deepest entered row are charged as traversed through column 1
/// even when their depth is 0.
pub fn route_cost(graph: &AisleGraph, depths: &[usize]) -> Result<Budget, GraphError> {
    graph.check_depths(depths)?;
    Ok(cost_of_depths(depths))
}

/// Reward collected by the depth profile; each vertex is credited once.
pub fn route_reward(graph: &AisleGraph, depths: &[usize]) -> Result<f64, GraphError> {
    graph.check_depths(depths)?;
    Ok(reward_of_depths(graph, depths))
}

/// Cost increase of extending `current` so that it also visits `target`.
pub fn marginal_cost(
    graph: &AisleGraph,
    current: &RouteSolution,
    target: Vertex,
) -> Result<Budget, GraphError> {
    graph.check_vertex(target)?;
    Ok(current.marginal_cost(target))
}

/// A cycle from home in canonical form: the deepest visited column of every row.
///
/// Depth 0 means the row was never entered and depth 1 means only its
/// interconnect vertex was traversed. Rows up to `i_max` always have depth >= 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteSolution {
    depths: Vec<usize>,
    i_max: usize,
    cost: Budget,
    reward: f64,
}

impl RouteSolution {
    /// The home-only cycle of a graph with `m` rows.
    pub fn empty(m: usize) -> Self {
        RouteSolution {
            depths: vec![0; m],
            i_max: 0,
            cost: 0,
            reward: 0.0,
        }
    }

    /// Canonicalizes a depth profile, raising skipped rows above the deepest
    /// entered row to depth 1.
    pub fn from_depths(graph: &AisleGraph, depths: &[usize]) -> Result<Self, GraphError> {
        graph.check_depths(depths)?;
        let i_max = last_entered_row(depths);
        let mut depths = depths.to_vec();
        for d in &mut depths[..i_max] {
            *d = (*d).max(1);
        }
        Ok(RouteSolution {
            cost: cost_of_depths(&depths),
            reward: reward_of_depths(graph, &depths),
            depths,
            i_max,
        })
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    pub fn depth(&self, row: usize) -> usize {
        self.depths[row - 1]
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn cost(&self) -> Budget {
        self.cost
    }

    pub fn reward(&self) -> f64 {
        self.reward
    }

    pub fn rows(&self) -> usize {
        self.depths.len()
    }

    /// Deepest row reached by the walk. The home row counts even when empty.
    #[inline]
    fn reached_rows(&self) -> usize {
        self.i_max.max(1)
    }

    /// Last column of `row` already covered by the walk, 0 for rows it never reaches.
    #[inline]
    pub fn explored(&self, row: usize) -> usize {
        if row <= self.reached_rows() {
            self.depths[row - 1].max(1)
        } else {
            0
        }
    }

    pub fn covers(&self, v: Vertex) -> bool {
        v.col <= self.explored(v.row)
    }

    /// Cost increase of adding `v`. Constant time; assumes `v` is inside the graph.
    #[inline]
    pub fn marginal_cost(&self, v: Vertex) -> Budget {
        let reached = self.reached_rows();
        if v.row > reached {
            2 * ((v.row - reached) + (v.col - 1)) as Budget
        } else {
            let explored = self.depths[v.row - 1].max(1);
            2 * v.col.saturating_sub(explored) as Budget
        }
    }

    /// Reward increase of adding `v` together with the rest of its row prefix.
    #[inline]
    pub fn marginal_reward(&self, graph: &AisleGraph, v: Vertex) -> f64 {
        let explored = self.explored(v.row);
        if v.col <= explored {
            0.0
        } else {
            let t = graph.cumulative();
            t.get(v.row, v.col) - t.get(v.row, explored)
        }
    }

    /// Extends the walk to `v`, collecting every vertex of its row up to `v`.
    /// Returns the cost increase.
    pub fn extend_to(&mut self, graph: &AisleGraph, v: Vertex) -> Budget {
        let delta_cost = self.marginal_cost(v);
        let delta_reward = self.marginal_reward(graph, v);
        if v.row > self.i_max {
            for d in &mut self.depths[self.i_max.max(1) - 1..v.row - 1] {
                *d = (*d).max(1);
            }
            self.i_max = v.row;
        }
        let d = &mut self.depths[v.row - 1];
        *d = (*d).max(v.col);
        self.cost += delta_cost;
        self.reward += delta_reward;
        delta_cost
    }

    /// Reward recomputed from the depth profile, independent of incremental bookkeeping.
    pub fn recomputed_reward(&self, graph: &AisleGraph) -> f64 {
        reward_of_depths(graph, &self.depths)
    }

    pub fn recomputed_cost(&self) -> Budget {
        cost_of_depths(&self.depths)
    }

    /// All vertices visited by the walk, row by row.
    pub fn visited(&self) -> Vec<Vertex> {
        let mut out = vec![Vertex::HOME];
        for row in 1..=self.i_max {
            for col in 1..=self.depths[row - 1] {
                if (row, col) != (1, 1) {
                    out.push(Vertex { row, col });
                }
            }
        }
        out
    }
}
