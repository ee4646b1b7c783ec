//! Reference implementations used as test oracles. They share no code with
//! the library: costs come from walking an explicit closed route and rewards
//! from summing grid cells.

#![allow(dead_code)]

use oasp::AisleGraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Closed walk from (1,1) that sweeps each row up to its depth and returns.
/// Rows below the deepest entered row are never visited.
pub fn walk(m: usize, depths: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(depths.len(), m);
    let last = depths.iter().rposition(|&d| d >= 1).map_or(1, |i| i + 1);
    let mut path = vec![(1, 1)];
    for row in 1..=last {
        if row > 1 {
            path.push((row, 1));
        }
        let depth = depths[row - 1].max(1);
        for col in 2..=depth {
            path.push((row, col));
        }
        for col in (1..depth).rev() {
            path.push((row, col));
        }
    }
    for row in (1..last).rev() {
        path.push((row, 1));
    }
    path
}

/// Number of edges in [`walk`], checking that every step is an aisle-graph edge.
pub fn walk_cost(m: usize, n: usize, depths: &[usize]) -> u64 {
    let path = walk(m, depths);
    for pair in path.windows(2) {
        let ((r1, c1), (r2, c2)) = (pair[0], pair[1]);
        assert!(r1 >= 1 && r1 <= m && c1 >= 1 && c1 <= n);
        let horizontal = r1 == r2 && c1.abs_diff(c2) == 1;
        let vertical = c1 == 1 && c2 == 1 && r1.abs_diff(r2) == 1;
        assert!(
            horizontal || vertical,
            "({r1},{c1}) -> ({r2},{c2}) is not an edge"
        );
    }
    assert_eq!(path.first(), path.last());
    (path.len() - 1) as u64
}

pub fn profile_reward(grid: &[Vec<f64>], depths: &[usize]) -> f64 {
    grid.iter()
        .zip(depths)
        .map(|(row, &d)| row.iter().take(d).sum::<f64>())
        .sum()
}

/// Every depth vector in `{0..=n}^m`.
pub fn all_profiles(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=n).map(move |d| {
                    let mut q = p.clone();
                    q.push(d);
                    q
                })
            })
            .collect();
    }
    out
}

/// Best reward for each half-budget `0..=half_max`, by exhaustive enumeration.
pub fn optimum_by_half_budget(grid: &[Vec<f64>], half_max: usize) -> Vec<f64> {
    let (m, n) = (grid.len(), grid[0].len());
    let mut best = vec![0.0f64; half_max + 1];
    for p in all_profiles(m, n) {
        let half = (walk_cost(m, n, &p) / 2) as usize;
        if half <= half_max {
            best[half] = best[half].max(profile_reward(grid, &p));
        }
    }
    for b in 1..=half_max {
        best[b] = best[b].max(best[b - 1]);
    }
    best
}

/// Random grid with zero first column and integer rewards in `0..=max`.
pub fn random_grid(rng: &mut ChaCha8Rng, m: usize, n: usize, max: u32) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| {
            (0..n)
                .map(|j| {
                    if j == 0 {
                        0.0
                    } else {
                        rng.gen_range(0..=max) as f64
                    }
                })
                .collect()
        })
        .collect()
}

pub fn graph(grid: &[Vec<f64>]) -> AisleGraph {
    AisleGraph::new(grid.len(), grid[0].len(), grid.to_vec()).unwrap()
}

pub fn even_budgets(ceiling: u64) -> impl Iterator<Item = u64> {
    (0..=ceiling).step_by(2)
}
