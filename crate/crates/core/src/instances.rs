//! Instance sources: Zipf-distributed synthetic grids, gridded soil-moisture
//! maps, and the JSON interchange format read and written by the CLI.

use std::fs;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::aisle_graph::{AisleGraph, GraphError};

/// Generator identifier recorded next to every synthetic instance.
pub const GENERATOR_ID: &str = "chacha8-seed_from_u64/inverse-cdf-zipf/v1";

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error("moisture cell ({row},{col}) is not finite")]
    NonFiniteMoisture { row: usize, col: usize },
    #[error("moisture grid is empty or ragged: {0}")]
    BadMoistureShape(String),
    #[error("malformed instance {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("malformed moisture CSV {path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl InstanceError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        InstanceError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, InstanceError::Io { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipfConfig {
    /// Skew exponent; 0 is uniform.
    pub theta: f64,
    /// Rewards are drawn from `0..max_reward`.
    pub max_reward: u32,
    pub seed: u64,
}

impl ZipfConfig {
    pub fn new(theta: f64, seed: u64) -> Self {
        ZipfConfig {
            theta,
            max_reward: 100,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if !self.theta.is_finite() || self.theta < 0.0 {
            return Err(InstanceError::Config(format!(
                "theta must be finite and >= 0, got {}",
                self.theta
            )));
        }
        if self.max_reward < 1 {
            return Err(InstanceError::Config("max_reward must be >= 1".into()));
        }
        Ok(())
    }

    /// `P(reward = k)` for `k = 0..max_reward`, proportional to `(k + 1)^-theta`.
    pub fn probabilities(&self) -> Vec<f64> {
        let weights = self.weights();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    }

    fn weights(&self) -> Vec<f64> {
        (0..self.max_reward)
            .map(|k| ((k + 1) as f64).powf(-self.theta))
            .collect()
    }
}

/// Provenance written next to each generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMetadata {
    pub theta: f64,
    pub seed: u64,
    pub generator: String,
    pub m: usize,
    pub n: usize,
    pub max_reward: u32,
}

impl GeneratorMetadata {
    pub fn for_config(m: usize, n: usize, config: &ZipfConfig) -> Self {
        GeneratorMetadata {
            theta: config.theta,
            seed: config.seed,
            generator: GENERATOR_ID.to_string(),
            m,
            n,
            max_reward: config.max_reward,
        }
    }
}

/// Draws an `m x n` grid with i.i.d. Zipf rewards outside column 1.
///
/// Cells are filled row-major from a ChaCha8 stream seeded with
/// `seed_from_u64(config.seed)`; each draw inverts the discrete CDF.
pub fn generate_zipf(m: usize, n: usize, config: &ZipfConfig) -> Result<AisleGraph, InstanceError> {
    config.validate()?;
    if m == 0 || n == 0 {
        return Err(GraphError::EmptyDimensions { m, n }.into());
    }
    let dist =
        WeightedIndex::new(config.weights()).map_err(|e| InstanceError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let rewards = (0..m * n)
        .map(|k| {
            if k % n == 0 {
                0.0
            } else {
                dist.sample(&mut rng) as f64
            }
        })
        .collect();
    Ok(AisleGraph::from_flat(m, n, rewards)?)
}

/// A gridded moisture map and the target moisture level.
#[derive(Debug, Clone, PartialEq)]
pub struct MoistureMap {
    pub grid: Vec<Vec<f64>>,
    pub target: f64,
}

impl MoistureMap {
    pub fn new(grid: Vec<Vec<f64>>, target: f64) -> Self {
        MoistureMap { grid, target }
    }

    /// Rows become columns; used to test maps with aisles running the other way.
    pub fn transposed(&self) -> Self {
        let rows = self.grid.len();
        let cols = self.grid.first().map_or(0, Vec::len);
        let grid = (0..cols)
            .map(|j| (0..rows).map(|i| self.grid[i][j]).collect())
            .collect();
        MoistureMap {
            grid,
            target: self.target,
        }
    }

    fn shape(&self) -> Result<(usize, usize), InstanceError> {
        let m = self.grid.len();
        let n = self.grid.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(InstanceError::BadMoistureShape("no cells".into()));
        }
        if let Some(i) = self.grid.iter().position(|r| r.len() != n) {
            return Err(InstanceError::BadMoistureShape(format!(
                "row {} has {} cells, expected {n}",
                i + 1,
                self.grid[i].len()
            )));
        }
        Ok((m, n))
    }
}

/// Rewards `|target - moisture|`; column 1 is forced to 0.
pub fn from_moisture(map: &MoistureMap) -> Result<AisleGraph, InstanceError> {
    let (m, n) = map.shape()?;
    if !map.target.is_finite() {
        return Err(InstanceError::Config(
            "moisture target must be finite".into(),
        ));
    }
    let mut rewards = Vec::with_capacity(m * n);
    for (i, row) in map.grid.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            if !cell.is_finite() {
                return Err(InstanceError::NonFiniteMoisture {
                    row: i + 1,
                    col: j + 1,
                });
            }
            rewards.push(if j == 0 {
                0.0
            } else {
                (map.target - cell).abs()
            });
        }
    }
    Ok(AisleGraph::from_flat(m, n, rewards)?)
}

/// Reads a header-less numeric CSV, one line per aisle.
pub fn read_moisture_csv(path: &Path) -> Result<Vec<Vec<f64>>, InstanceError> {
    let csv_err = |source| InstanceError::Csv {
        path: path.display().to_string(),
        source,
    };
    let file = fs::File::open(path).map_err(|e| InstanceError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut grid = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field.parse::<f64>().map_err(|_| {
                    InstanceError::BadMoistureShape(format!(
                        "cell ({},{}) is not a number: {field:?}",
                        i + 1,
                        j + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        grid.push(row);
    }
    Ok(grid)
}

#[derive(Deserialize)]
struct InstanceFile {
    m: usize,
    n: usize,
    rewards: Vec<Vec<f64>>,
}

/// Integral values print as JSON integers, everything else as shortest round-trip floats.
pub(crate) fn json_number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.007_199_254_740_992e15 {
        Value::from(x as i64)
    } else {
        Value::from(x)
    }
}

pub fn instance_to_json(graph: &AisleGraph) -> String {
    let rewards: Vec<Value> = graph
        .to_rows()
        .into_iter()
        .map(|row| Value::Array(row.into_iter().map(json_number).collect()))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("m".into(), graph.rows().into());
    obj.insert("n".into(), graph.cols().into());
    obj.insert("rewards".into(), Value::Array(rewards));
    Value::Object(obj).to_string()
}

pub fn instance_from_json(text: &str, origin: &str) -> Result<AisleGraph, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|source| InstanceError::Json {
        path: origin.to_string(),
        source,
    })?;
    Ok(AisleGraph::new(file.m, file.n, file.rewards)?)
}

pub fn read_instance(path: &Path) -> Result<AisleGraph, InstanceError> {
    let text = fs::read_to_string(path).map_err(|e| InstanceError::io(path, e))?;
    instance_from_json(&text, &path.display().to_string())
}

pub fn write_instance(graph: &AisleGraph, path: &Path) -> Result<(), InstanceError> {
    fs::write(path, instance_to_json(graph) + "\n").map_err(|e| InstanceError::io(path, e))
}

pub fn write_metadata(meta: &GeneratorMetadata, path: &Path) -> Result<(), InstanceError> {
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes");
    fs::write(path, text + "\n").map_err(|e| InstanceError::io(path, e))
}

pub fn read_metadata(path: &Path) -> Result<GeneratorMetadata, InstanceError> {
    let text = fs::read_to_string(path).map_err(|e| InstanceError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| InstanceError::Json {
        path: path.display().to_string(),
        source,
    })
}
