//! Budget sweeps over instance batches and their CSV/JSON reports.
//!
//! Each `(instance, budget)` pair is an independent work unit that runs every
//! requested solver. Rows are sorted before emission, so a report does not
//! depend on how many workers produced it (apart from `runtime_ms`).

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::aisle_graph::{AisleGraph, Budget};
use crate::instances::{generate_zipf, InstanceError, ZipfConfig};
use crate::solvers::{Algorithm, SolverError};

/// Header of the sweep CSV. `runtime_ms` is dropped when timing is disabled.
pub const CSV_COLUMNS: [&str; 12] = [
    "instance_id",
    "tag",
    "m",
    "n",
    "budget",
    "budget_pct",
    "algorithm",
    "reward",
    "reward_pct",
    "cost",
    "rho",
    "runtime_ms",
];

/// z-value of the two-sided 95% normal interval.
const Z95: f64 = 1.96;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance batch is empty")]
    EmptyBatch,
    #[error("instance {id} is A({found_m},{found_n}) but the batch is A({m},{n})")]
    DimensionMismatch {
        id: String,
        m: usize,
        n: usize,
        found_m: usize,
        found_n: usize,
    },
    #[error("duplicate instance id {0}")]
    DuplicateInstance(String),
    #[error("invalid budget grid: {0}")]
    InvalidBudget(String),
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// A graph with the identifiers it is reported under.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub id: String,
    /// Source label, e.g. `zipf:theta=0.9` or `moisture`.
    pub tag: String,
    pub graph: AisleGraph,
}

/// `count` Zipf instances with seeds `seed, seed + 1, ...`.
pub fn zipf_batch(
    m: usize,
    n: usize,
    theta: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<BenchInstance>, BenchError> {
    (0..count as u64)
        .map(|k| {
            let config = ZipfConfig::new(theta, seed + k);
            Ok(BenchInstance {
                id: format!("zipf-m{m}-n{n}-t{theta}-s{}", seed + k),
                tag: format!("zipf:theta={theta}"),
                graph: generate_zipf(m, n, &config)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetPoint {
    Absolute(Budget),
    /// Percentage of the sweep ceiling `2(mn + m)`.
    Percent(f64),
}

/// Which budgets a sweep visits.
#[derive(Debug, Clone, PartialEq)]
pub enum BudgetGrid {
    Explicit(Vec<BudgetPoint>),
    /// `k` evenly spaced even budgets across `[2n, 2(mn + m)]`.
    Spaced(usize),
    /// Every even budget in `[2n, 2(mn + m)]`.
    Every,
}

impl Default for BudgetGrid {
    fn default() -> Self {
        BudgetGrid::Spaced(50)
    }
}

impl FromStr for BudgetPoint {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(pct) = s.strip_suffix('%') {
            let value: f64 = pct
                .trim()
                .parse()
                .map_err(|_| BenchError::InvalidBudget(format!("bad percentage {s:?}")))?;
            if !(0.0..=100.0).contains(&value) {
                return Err(BenchError::InvalidBudget(format!(
                    "{s} is outside 0%..100%"
                )));
            }
            Ok(BudgetPoint::Percent(value))
        } else {
            s.parse::<Budget>()
                .map(BudgetPoint::Absolute)
                .map_err(|_| BenchError::InvalidBudget(format!("bad budget {s:?}")))
        }
    }
}

impl FromStr for BudgetGrid {
    type Err = BenchError;

    /// `auto`, `auto:K`, `all`, or a comma-separated list of budgets and percentages.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "auto" => return Ok(BudgetGrid::default()),
            "all" => return Ok(BudgetGrid::Every),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("auto:") {
            let k: usize = k
                .parse()
                .map_err(|_| BenchError::InvalidBudget(format!("bad point count {k:?}")))?;
            if k == 0 {
                return Err(BenchError::InvalidBudget(
                    "auto grid needs at least one point".into(),
                ));
            }
            return Ok(BudgetGrid::Spaced(k));
        }
        let points = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<BudgetPoint>, _>>()?;
        Ok(BudgetGrid::Explicit(points))
    }
}

impl BudgetGrid {
    /// Concrete even budgets for an `A(m, n)` batch, ascending and deduplicated.
    pub fn resolve(&self, m: usize, n: usize) -> Result<Vec<Budget>, BenchError> {
        let ceiling = 2 * (m * n + m) as Budget;
        let floor = (2 * n as Budget).min(ceiling);
        let mut budgets: Vec<Budget> = match self {
            BudgetGrid::Explicit(points) => points
                .iter()
                .map(|p| match *p {
                    BudgetPoint::Absolute(b) if b % 2 == 1 => Err(BenchError::InvalidBudget(
                        format!("sweep budget {b} is odd"),
                    )),
                    BudgetPoint::Absolute(b) if b > ceiling => Err(BenchError::InvalidBudget(
                        format!("sweep budget {b} exceeds 2(mn+m) = {ceiling}"),
                    )),
                    BudgetPoint::Absolute(b) => Ok(b),
                    BudgetPoint::Percent(p) => Ok(percent_budget(p, ceiling)),
                })
                .collect::<Result<_, _>>()?,
            BudgetGrid::Spaced(0) => {
                return Err(BenchError::InvalidBudget(
                    "auto grid needs at least one point".into(),
                ))
            }
            BudgetGrid::Spaced(1) => vec![ceiling],
            BudgetGrid::Spaced(k) => {
                let span = ceiling - floor;
                let steps = (*k - 1) as Budget;
                (0..=steps)
                    .map(|i| (floor + i * span / steps) & !1)
                    .collect()
            }
            BudgetGrid::Every => (floor..=ceiling).step_by(2).collect(),
        };
        budgets.sort_unstable();
        budgets.dedup();
        Ok(budgets)
    }
}

/// Even budget closest below `pct` percent of `ceiling`.
pub fn percent_budget(pct: f64, ceiling: Budget) -> Budget {
    ((pct / 100.0 * ceiling as f64 + 1e-9).floor() as Budget).min(ceiling) & !1
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub budgets: BudgetGrid,
    pub algorithms: Vec<Algorithm>,
    /// Worker threads; 0 means one per available core.
    pub parallelism: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            budgets: BudgetGrid::default(),
            algorithms: Algorithm::BENCHMARKED.to_vec(),
            parallelism: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub instance_id: String,
    pub tag: String,
    pub m: usize,
    pub n: usize,
    pub budget: Budget,
    pub budget_pct: f64,
    pub algorithm: Algorithm,
    pub reward: f64,
    pub reward_pct: f64,
    pub cost: Budget,
    /// Reward relative to the exact optimum; present when `optsa` ran.
    pub rho: Option<f64>,
    pub runtime_ms: f64,
}

/// Mean and 95% half-width per `(tag, m, n, budget, algorithm)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub tag: String,
    pub m: usize,
    pub n: usize,
    pub budget: Budget,
    pub budget_pct: f64,
    pub algorithm: Algorithm,
    pub count: usize,
    pub reward_mean: f64,
    pub reward_ci95: f64,
    pub reward_pct_mean: f64,
    pub reward_pct_ci95: f64,
    pub rho_mean: Option<f64>,
    pub rho_ci95: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<AggregateRow>,
}

/// Sample mean and `1.96 * s / sqrt(k)` with the `k - 1` standard deviation.
/// A single sample has half-width 0.
pub fn mean_ci95(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, Z95 * var.sqrt() / (k as f64).sqrt())
}

/// `reward / optimum`, with `0 / 0` read as 1.
pub fn rho(reward: f64, optimum: f64) -> f64 {
    if optimum > 0.0 {
        reward / optimum
    } else {
        1.0
    }
}

fn validate_batch(batch: &[BenchInstance]) -> Result<(usize, usize), BenchError> {
    let first = batch.first().ok_or(BenchError::EmptyBatch)?;
    let (m, n) = (first.graph.rows(), first.graph.cols());
    let mut ids = HashSet::new();
    for inst in batch {
        if (inst.graph.rows(), inst.graph.cols()) != (m, n) {
            return Err(BenchError::DimensionMismatch {
                id: inst.id.clone(),
                m,
                n,
                found_m: inst.graph.rows(),
                found_n: inst.graph.cols(),
            });
        }
        if !ids.insert(inst.id.as_str()) {
            return Err(BenchError::DuplicateInstance(inst.id.clone()));
        }
    }
    Ok((m, n))
}

fn run_cell(
    inst: &BenchInstance,
    budget: Budget,
    algorithms: &[Algorithm],
    ceiling: Budget,
) -> Result<Vec<SweepRow>, BenchError> {
    let total = inst.graph.total_reward();
    let results = algorithms
        .iter()
        .map(|alg| alg.solve(&inst.graph, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let optimum = results
        .iter()
        .find(|r| r.algorithm == Algorithm::OptSa)
        .map(|r| r.reward());
    Ok(results
        .into_iter()
        .map(|res| SweepRow {
            instance_id: inst.id.clone(),
            tag: inst.tag.clone(),
            m: inst.graph.rows(),
            n: inst.graph.cols(),
            budget,
            budget_pct: 100.0 * budget as f64 / ceiling as f64,
            algorithm: res.algorithm,
            reward: res.reward(),
            reward_pct: if total > 0.0 {
                100.0 * res.reward() / total
            } else {
                100.0
            },
            cost: res.cost(),
            rho: optimum.map(|opt| rho(res.reward(), opt)),
            runtime_ms: res.runtime_ms,
        })
        .collect())
}

pub fn run_sweep(batch: &[BenchInstance], config: &SweepConfig) -> Result<SweepReport, BenchError> {
    let (m, n) = validate_batch(batch)?;
    if config.algorithms.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    let mut algorithms = config.algorithms.clone();
    algorithms.sort_unstable();
    algorithms.dedup();
    let budgets = config.budgets.resolve(m, n)?;
    let ceiling = 2 * (m * n + m) as Budget;

    let units: Vec<(&BenchInstance, Budget)> = batch
        .iter()
        .flat_map(|inst| budgets.iter().map(move |&b| (inst, b)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let cells: Vec<Vec<SweepRow>> = pool.install(|| {
        units
            .par_iter()
            .map(|&(inst, b)| run_cell(inst, b, &algorithms, ceiling))
            .collect::<Result<_, _>>()
    })?;

    let mut rows: Vec<SweepRow> = cells.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.instance_id.as_str(), a.budget, a.algorithm).cmp(&(
            b.instance_id.as_str(),
            b.budget,
            b.algorithm,
        ))
    });
    let aggregates = aggregate(&rows);
    Ok(SweepReport { rows, aggregates })
}

/// Groups rows by `(tag, m, n, budget, algorithm)` and summarizes each group.
pub fn aggregate(rows: &[SweepRow]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(&str, usize, usize, Budget, Algorithm), Vec<&SweepRow>> =
        BTreeMap::new();
    for row in rows {
        groups
            .entry((row.tag.as_str(), row.m, row.n, row.budget, row.algorithm))
            .or_default()
            .push(row);
    }
    groups
        .into_iter()
        .map(|((tag, m, n, budget, algorithm), group)| {
            let pick = |f: fn(&SweepRow) -> f64| group.iter().map(|r| f(r)).collect::<Vec<_>>();
            let (reward_mean, reward_ci95) = mean_ci95(&pick(|r| r.reward));
            let (reward_pct_mean, reward_pct_ci95) = mean_ci95(&pick(|r| r.reward_pct));
            let rhos: Option<Vec<f64>> = group.iter().map(|r| r.rho).collect();
            let rho_stats = rhos.map(|v| mean_ci95(&v));
            AggregateRow {
                tag: tag.to_string(),
                m,
                n,
                budget,
                budget_pct: group[0].budget_pct,
                algorithm,
                count: group.len(),
                reward_mean,
                reward_ci95,
                reward_pct_mean,
                reward_pct_ci95,
                rho_mean: rho_stats.map(|s| s.0),
                rho_ci95: rho_stats.map(|s| s.1),
            }
        })
        .collect()
}

/// Writes the row CSV. With `timing` off the `runtime_ms` column is omitted,
/// which makes the output byte-stable across runs.
pub fn write_csv<W: Write>(report: &SweepReport, out: W, timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let columns = if timing {
        &CSV_COLUMNS[..]
    } else {
        &CSV_COLUMNS[..11]
    };
    w.write_record(columns)?;
    for r in &report.rows {
        let mut record = vec![
            r.instance_id.clone(),
            r.tag.clone(),
            r.m.to_string(),
            r.n.to_string(),
            r.budget.to_string(),
            r.budget_pct.to_string(),
            r.algorithm.to_string(),
            r.reward.to_string(),
            r.reward_pct.to_string(),
            r.cost.to_string(),
            r.rho.map_or_else(String::new, |x| x.to_string()),
        ];
        if timing {
            record.push(format!("{:.3}", r.runtime_ms));
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(report: &SweepReport, timing: bool) -> String {
    let mut buf = Vec::new();
    write_csv(report, &mut buf, timing).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// The aggregate table as CSV; an absent `rho` is an empty field.
pub fn aggregates_csv_string(report: &SweepReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.aggregates {
        w.serialize(row).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV output is UTF-8")
}

pub fn emit_csv(report: &SweepReport, path: &Path, timing: bool) -> Result<(), BenchError> {
    fs::write(path, csv_string(report, timing)).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn json_string(report: &SweepReport, timing: bool) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    if !timing {
        if let Some(rows) = value.get_mut("rows").and_then(|r| r.as_array_mut()) {
            for row in rows {
                if let Some(obj) = row.as_object_mut() {
                    obj.remove("runtime_ms");
                }
            }
        }
    }
    serde_json::to_string_pretty(&value).expect("report serializes")
}

pub fn emit_json(report: &SweepReport, path: &Path, timing: bool) -> Result<(), BenchError> {
    fs::write(path, json_string(report, timing) + "\n").map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample_4x5;

    fn sample_batch() -> Vec<BenchInstance> {
        vec![BenchInstance {
            id: "sample".into(),
            tag: "fixture".into(),
            graph: sample_4x5(),
        }]
    }

    fn explicit(budgets: &[Budget]) -> BudgetGrid {
        BudgetGrid::Explicit(budgets.iter().map(|&b| BudgetPoint::Absolute(b)).collect())
    }

    #[test]
    fn sample_rho_column() {
        let config = SweepConfig {
            budgets: explicit(&[16]),
            ..SweepConfig::default()
        };
        let report = run_sweep(&sample_batch(), &config).unwrap();
        let rhos: Vec<f64> = report.rows.iter().map(|r| r.rho.unwrap()).collect();
        assert_eq!(rhos, [1.0, 0.9375, 1.0, 0.78125, 1.0]);
        let algs: Vec<Algorithm> = report.rows.iter().map(|r| r.algorithm).collect();
        assert_eq!(algs, Algorithm::BENCHMARKED);
    }

    #[test]
    fn zero_budget_rows() {
        let config = SweepConfig {
            budgets: explicit(&[0]),
            ..SweepConfig::default()
        };
        let report = run_sweep(&sample_batch(), &config).unwrap();
        assert!(report
            .rows
            .iter()
            .all(|r| r.reward == 0.0 && r.rho == Some(1.0)));
    }

    #[test]
    fn ceiling_budget_collects_everything() {
        let config = SweepConfig {
            budgets: BudgetGrid::Explicit(vec![BudgetPoint::Percent(100.0)]),
            ..SweepConfig::default()
        };
        let report = run_sweep(&sample_batch(), &config).unwrap();
        for r in &report.rows {
            assert_eq!(r.budget, 48);
            assert_eq!(r.budget_pct, 100.0);
            assert_eq!(r.reward_pct, 100.0, "{}", r.algorithm);
        }
    }

    #[test]
    fn batch_errors() {
        assert!(matches!(
            run_sweep(&[], &SweepConfig::default()),
            Err(BenchError::EmptyBatch)
        ));
        let mut batch = sample_batch();
        batch.push(BenchInstance {
            id: "other".into(),
            tag: "x".into(),
            graph: AisleGraph::new(1, 1, vec![vec![0.0]]).unwrap(),
        });
        assert!(matches!(
            run_sweep(&batch, &SweepConfig::default()),
            Err(BenchError::DimensionMismatch { .. })
        ));
        let dup = vec![sample_batch().remove(0), sample_batch().remove(0)];
        assert!(matches!(
            run_sweep(&dup, &SweepConfig::default()),
            Err(BenchError::DuplicateInstance(_))
        ));
    }

    #[test]
    fn grid_parsing_and_resolution() {
        let grid: BudgetGrid = "16,50%,0".parse().unwrap();
        assert_eq!(grid.resolve(4, 5).unwrap(), vec![0, 16, 24]);
        assert!("17".parse::<BudgetGrid>().unwrap().resolve(4, 5).is_err());
        assert!("50".parse::<BudgetGrid>().unwrap().resolve(4, 5).is_err());
        assert!("abc".parse::<BudgetGrid>().is_err());
        assert!("150%".parse::<BudgetGrid>().is_err());
        let spaced = BudgetGrid::Spaced(50).resolve(100, 50).unwrap();
        assert_eq!(spaced.len(), 50);
        assert_eq!((spaced[0], *spaced.last().unwrap()), (100, 10200));
        assert!(spaced.iter().all(|b| b % 2 == 0));
        let every = BudgetGrid::Every.resolve(4, 5).unwrap();
        assert_eq!(every, (10..=48).step_by(2).collect::<Vec<_>>());
        assert_eq!(
            "auto:3"
                .parse::<BudgetGrid>()
                .unwrap()
                .resolve(4, 5)
                .unwrap(),
            vec![10, 28, 48]
        );
    }

    #[test]
    fn confidence_interval() {
        let (mean, half) = mean_ci95(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mean, 2.5);
        // s = sqrt(5/3)
        assert!((half - 1.96 * (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(mean_ci95(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn csv_layout() {
        let config = SweepConfig {
            budgets: explicit(&[16]),
            algorithms: vec![Algorithm::OptSa],
            parallelism: 1,
        };
        let report = run_sweep(&sample_batch(), &config).unwrap();
        let text = csv_string(&report, false);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "instance_id,tag,m,n,budget,budget_pct,algorithm,reward,reward_pct,cost,rho"
        );
        assert_eq!(
            lines[1],
            "sample,fixture,4,5,16,33.333333333333336,optsa,32,55.172413793103445,16,1"
        );
        assert_eq!(text, csv_string(&report, false));
        assert!(csv_string(&report, true)
            .lines()
            .next()
            .unwrap()
            .ends_with(",runtime_ms"));
    }

    #[test]
    fn rho_absent_without_optimum() {
        let config = SweepConfig {
            budgets: explicit(&[16]),
            algorithms: vec![Algorithm::GdyMe],
            parallelism: 1,
        };
        let report = run_sweep(&sample_batch(), &config).unwrap();
        assert_eq!(report.rows[0].rho, None);
        assert!(csv_string(&report, false)
            .lines()
            .nth(1)
            .unwrap()
            .ends_with(",16,"));
    }
}
