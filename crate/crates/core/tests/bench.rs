use std::collections::BTreeMap;

use oasp::bench::{
    csv_string, json_string, run_sweep, zipf_batch, BenchInstance, BudgetGrid, SweepConfig,
    CSV_COLUMNS,
};
use oasp::Algorithm;

fn batch() -> Vec<BenchInstance> {
    let mut b = zipf_batch(6, 7, 0.9, 4, 100).unwrap();
    b.extend(zipf_batch(6, 7, 2.7, 3, 200).unwrap());
    b
}

fn config(parallelism: usize) -> SweepConfig {
    SweepConfig {
        budgets: BudgetGrid::Spaced(9),
        algorithms: Algorithm::BENCHMARKED.to_vec(),
        parallelism,
    }
}

#[test]
fn output_is_independent_of_worker_count() {
    let serial = run_sweep(&batch(), &config(1)).unwrap();
    for workers in [2, 8, 0] {
        let parallel = run_sweep(&batch(), &config(workers)).unwrap();
        assert_eq!(csv_string(&serial, false), csv_string(&parallel, false));
        assert_eq!(json_string(&serial, false), json_string(&parallel, false));
    }
}

#[test]
fn rows_are_sorted_and_complete() {
    let report = run_sweep(&batch(), &config(4)).unwrap();
    assert_eq!(report.rows.len(), 7 * 9 * 5);
    let keys: Vec<_> = report
        .rows
        .iter()
        .map(|r| (r.instance_id.clone(), r.budget, r.algorithm))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for r in &report.rows {
        assert!(r.cost <= r.budget);
        let opt = Algorithm::OptSa
            .solve(
                &batch()
                    .iter()
                    .find(|b| b.id == r.instance_id)
                    .unwrap()
                    .graph,
                r.budget,
            )
            .unwrap()
            .reward();
        let expected = if opt > 0.0 { r.reward / opt } else { 1.0 };
        assert_eq!(r.rho, Some(expected));
        assert!(r.rho.unwrap() <= 1.0);
    }
}

#[test]
fn aggregates_agree_with_rows() {
    let report = run_sweep(&batch(), &config(3)).unwrap();
    let mut groups: BTreeMap<(String, u64, Algorithm), Vec<f64>> = BTreeMap::new();
    for r in &report.rows {
        groups
            .entry((r.tag.clone(), r.budget, r.algorithm))
            .or_default()
            .push(r.reward);
    }
    assert_eq!(groups.len(), report.aggregates.len());
    for a in &report.aggregates {
        let xs = &groups[&(a.tag.clone(), a.budget, a.algorithm)];
        let k = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / k;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        assert_eq!(a.count, xs.len());
        assert!((a.reward_mean - mean).abs() < 1e-9);
        assert!((a.reward_ci95 - 1.96 * var.sqrt() / k.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn csv_header_and_timing_column() {
    let report = run_sweep(&batch(), &config(1)).unwrap();
    let with = csv_string(&report, true);
    let without = csv_string(&report, false);
    assert_eq!(with.lines().next().unwrap(), CSV_COLUMNS.join(","));
    assert_eq!(without.lines().next().unwrap(), CSV_COLUMNS[..11].join(","));
    assert_eq!(with.lines().count(), report.rows.len() + 1);
    assert!(!json_string(&report, false).contains("runtime_ms"));
    assert!(json_string(&report, true).contains("runtime_ms"));
}
