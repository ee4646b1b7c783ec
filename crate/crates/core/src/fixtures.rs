//! Small hand-checkable instances shared by the tests and doc examples.

use crate::aisle_graph::AisleGraph;

const SAMPLE_4X5: [[f64; 5]; 4] = [
    [0.0, 3.0, 1.0, 4.0, 1.0],
    [0.0, 1.0, 1.0, 9.0, 6.0],
    [0.0, 2.0, 8.0, 9.0, 9.0],
    [0.0, 1.0, 1.0, 1.0, 1.0],
];

/// Hand-checkable `A(4,5)` grid used throughout the tests.
pub fn sample_4x5() -> AisleGraph {
    AisleGraph::new(4, 5, SAMPLE_4X5.iter().map(|r| r.to_vec()).collect())
        .expect("sample grid is valid")
}

/// [`sample_4x5`] with an extra all-ones fifth row, for probing rows below `i_max = 4`.
pub fn sample_5x5() -> AisleGraph {
    let mut rows: Vec<Vec<f64>> = SAMPLE_4X5.iter().map(|r| r.to_vec()).collect();
    rows.push(vec![0.0, 1.0, 1.0, 1.0, 1.0]);
    AisleGraph::new(5, 5, rows).expect("sample grid is valid")
}
