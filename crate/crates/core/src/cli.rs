//! The `oasp` command line: instance generation, single solves, oracle checks
//! and budget sweeps.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error, 3 internal
//! invariant failure. Every error is reported on stderr as one line starting
//! with `error:`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::aisle_graph::{AisleGraph, GraphError};
use crate::bench::{self, BenchError, BenchInstance, BudgetGrid, BudgetPoint, SweepConfig};
use crate::instances::{
    self, from_moisture, generate_zipf, json_number, read_instance, read_metadata,
    read_moisture_csv, write_instance, write_metadata, GeneratorMetadata, InstanceError,
    MoistureMap, ZipfConfig,
};
use crate::solvers::{
    brute_force_frontier, even_budget, solve_optsa, Algorithm, SolverError, SolverResult,
    APPROX_RATIO, BRUTE_FORCE_LOG2_LIMIT,
};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Io(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        match &e {
            InstanceError::Io { .. } => CliError::Io(e.to_string()),
            InstanceError::Csv { source, .. } if source.is_io_error() => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Instance(inner) => inner.into(),
            BenchError::Io { .. } => CliError::Io(e.to_string()),
            BenchError::Pool(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(
    name = "oasp",
    version,
    about = "Reward-maximizing walks on single-access aisle-graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write Zipf-distributed instances and their generator metadata.
    Generate(GenerateArgs),
    /// Solve one instance at one budget.
    Solve(SolveArgs),
    /// Run every solver over a budget grid and write the CSV report.
    Sweep(SweepArgs),
    /// Compare the DP against exhaustive enumeration on random small instances.
    OracleCheck(OracleArgs),
    /// Print the size, total reward and budget landmarks of an instance.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance `k` uses seed `seed + k`.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 100)]
    pub max_reward: u32,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Even budget, or a percentage of 2(mn+m) such as `40%`. Odd budgets are floored.
    #[arg(long)]
    pub budget: String,
    /// Solver name or `all`.
    #[arg(long, default_value = "all")]
    pub algorithm: String,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Directory of instance JSON files.
    #[arg(long, conflicts_with_all = ["moisture", "target", "transpose"], required_unless_present = "moisture")]
    pub instances_dir: Option<PathBuf>,
    /// Gridded moisture CSV, one line per aisle.
    #[arg(long, requires = "target")]
    pub moisture: Option<PathBuf>,
    /// Target moisture; rewards are |target - moisture|.
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<f64>,
    /// Swap rows and columns of the moisture map.
    #[arg(long)]
    pub transpose: bool,
    /// Comma-separated solver names.
    #[arg(long, default_value = "optsa,gdyme,gdymc,apxmre,apxmrc")]
    pub algorithms: String,
    /// `auto`, `auto:K`, `all`, or a list like `16,40,50%`.
    #[arg(long, default_value = "auto")]
    pub budget_grid: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write rows and aggregates as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Also write the aggregate (mean, 95% CI) table as CSV.
    #[arg(long)]
    pub aggregates: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "OASP_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Omit runtime_ms so the output is byte-stable.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rewards are integers drawn from 0..=max_reward.
    #[arg(long, default_value_t = 20)]
    pub max_reward: u32,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub instance: PathBuf,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{first}");
            return 1;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {}", e.message().replace('\n', " "));
            e.exit_code()
        }
    }
}

pub fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Generate(args) => cmd_generate(&args, out),
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out),
        Command::OracleCheck(args) => cmd_oracle_check(&args, out),
        Command::Info(args) => cmd_info(&args, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Validation("--count must be at least 1".into()));
    }
    if args.m == 0 || args.n == 0 {
        return Err(GraphError::EmptyDimensions {
            m: args.m,
            n: args.n,
        }
        .into());
    }
    let base = ZipfConfig {
        theta: args.theta,
        max_reward: args.max_reward,
        seed: args.seed,
    };
    base.validate()?;
    fs::create_dir_all(&args.out_dir).map_err(|e| io_error(&args.out_dir, e))?;
    for k in 0..args.count as u64 {
        let config = ZipfConfig {
            seed: args.seed + k,
            ..base.clone()
        };
        let graph = generate_zipf(args.m, args.n, &config)?;
        let stem = format!(
            "zipf_m{}_n{}_t{}_s{}",
            args.m, args.n, args.theta, config.seed
        );
        let path = args.out_dir.join(format!("{stem}.json"));
        write_instance(&graph, &path)?;
        let meta = GeneratorMetadata::for_config(args.m, args.n, &config);
        write_metadata(&meta, &args.out_dir.join(format!("{stem}.meta.json")))?;
        emit(out, &format!("{}\n", path.display()))?;
    }
    Ok(())
}

fn parse_budget(text: &str, graph: &AisleGraph) -> Result<u64, CliError> {
    match text.parse::<BudgetPoint>()? {
        BudgetPoint::Absolute(b) => Ok(even_budget(b)),
        BudgetPoint::Percent(p) => Ok(bench::percent_budget(p, graph.sweep_ceiling())),
    }
}

/// The solution object printed by `solve`.
pub fn solution_json(result: &SolverResult) -> Value {
    let mut obj = json!({
        "algorithm": result.algorithm.name(),
        "budget": result.budget,
        "reward": json_number(result.reward()),
        "cost": result.cost(),
        "depths": result.solution.depths(),
    });
    if let Some(single) = &result.best_single {
        obj["best_single"] = json!({
            "vertex": [single.vertex.row, single.vertex.col],
            "vertex_reward": json_number(single.vertex_reward),
            "reward": json_number(single.route.reward()),
            "cost": single.route.cost(),
            "depths": single.route.depths(),
        });
    }
    obj
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let algorithms = if args.algorithm.eq_ignore_ascii_case("all") {
        Algorithm::BENCHMARKED.to_vec()
    } else {
        vec![args.algorithm.parse::<Algorithm>()?]
    };
    let graph = read_instance(&args.instance)?;
    let budget = parse_budget(&args.budget, &graph)?;
    let mut text = String::new();
    for alg in algorithms {
        let result = alg.solve(&graph, budget)?;
        if result.cost() > budget {
            return Err(CliError::Internal(format!(
                "{alg} returned a walk of cost {} above the budget {budget}",
                result.cost()
            )));
        }
        text.push_str(&solution_json(&result).to_string());
        text.push('\n');
    }
    match &args.out {
        Some(path) => write_file(path, &text),
        None => emit(out, &text),
    }
}

fn load_instance_dir(dir: &Path) -> Result<Vec<BenchInstance>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| io_error(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| io_error(dir, e))?.path();
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
        if name.ends_with(".json") && !name.ends_with(".meta.json") {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Validation(format!(
            "no instance files in {}",
            dir.display()
        )));
    }
    paths
        .into_iter()
        .map(|path| {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("instance")
                .to_string();
            let meta_path = path.with_file_name(format!("{stem}.meta.json"));
            let tag = if meta_path.exists() {
                format!("zipf:theta={}", read_metadata(&meta_path)?.theta)
            } else {
                "file".to_string()
            };
            Ok(BenchInstance {
                graph: read_instance(&path)?,
                id: stem,
                tag,
            })
        })
        .collect()
}

fn load_moisture(path: &Path, target: f64, transpose: bool) -> Result<BenchInstance, CliError> {
    let mut map = MoistureMap::new(read_moisture_csv(path)?, target);
    if transpose {
        map = map.transposed();
    }
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("moisture");
    Ok(BenchInstance {
        id: if transpose {
            format!("{stem}-T")
        } else {
            stem.to_string()
        },
        tag: if transpose {
            "moisture:transposed"
        } else {
            "moisture"
        }
        .to_string(),
        graph: from_moisture(&map)?,
    })
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let algorithms = args
        .algorithms
        .split(',')
        .map(|s| s.trim().parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()?;
    let budgets: BudgetGrid = args.budget_grid.parse()?;
    let batch = match (&args.instances_dir, &args.moisture, args.target) {
        (Some(dir), _, _) => load_instance_dir(dir)?,
        (None, Some(csv), Some(target)) => vec![load_moisture(csv, target, args.transpose)?],
        _ => {
            return Err(CliError::Validation(
                "either --instances-dir or --moisture with --target is required".into(),
            ))
        }
    };
    let config = SweepConfig {
        budgets,
        algorithms,
        parallelism: args.jobs,
    };
    let report = bench::run_sweep(&batch, &config)?;
    let timing = !args.no_timing;
    if let Some(path) = &args.json {
        bench::emit_json(&report, path, timing)?;
    }
    if let Some(path) = &args.aggregates {
        write_file(path, &bench::aggregates_csv_string(&report))?;
    }
    match &args.out {
        Some(path) => bench::emit_csv(&report, path, timing).map_err(CliError::from),
        None => emit(out, &bench::csv_string(&report, timing)),
    }
}

/// Outcome of an oracle run; `failure` holds the first counterexample.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub trials: usize,
    pub budget_checks: usize,
    pub min_ratio_apxmre: f64,
    pub min_ratio_apxmrc: f64,
    pub failure: Option<String>,
}

pub fn oracle_check(args: &OracleArgs) -> Result<OracleSummary, CliError> {
    if args.trials == 0 {
        return Err(CliError::Validation("--trials must be at least 1".into()));
    }
    if args.m_max == 0 || args.n_max == 0 {
        return Err(CliError::Validation(
            "--m-max and --n-max must be at least 1".into(),
        ));
    }
    let work = args.m_max as f64 * ((args.n_max + 1) as f64).log2();
    if work > BRUTE_FORCE_LOG2_LIMIT {
        return Err(CliError::Validation(format!(
            "m-max*log2(n-max+1) = {work:.2} exceeds the enumeration limit {BRUTE_FORCE_LOG2_LIMIT}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut summary = OracleSummary {
        trials: args.trials,
        budget_checks: 0,
        min_ratio_apxmre: f64::INFINITY,
        min_ratio_apxmrc: f64::INFINITY,
        failure: None,
    };
    for trial in 0..args.trials {
        let m = rng.gen_range(1..=args.m_max);
        let n = rng.gen_range(1..=args.n_max);
        let rewards: Vec<f64> = (0..m * n)
            .map(|k| {
                if k % n == 0 {
                    0.0
                } else {
                    rng.gen_range(0..=args.max_reward) as f64
                }
            })
            .collect();
        let graph = AisleGraph::from_flat(m, n, rewards)?;
        if let Some(detail) = check_instance(&graph, &mut summary)? {
            summary.failure = Some(format!(
                "trial {trial}: {detail}; instance {}",
                instances::instance_to_json(&graph)
            ));
            break;
        }
    }
    Ok(summary)
}

fn check_instance(
    graph: &AisleGraph,
    summary: &mut OracleSummary,
) -> Result<Option<String>, CliError> {
    let ceiling = graph.sweep_ceiling();
    let half = (ceiling / 2) as usize;
    let frontier = brute_force_frontier(graph, half)?;
    let (_, tables) = solve_optsa(graph, ceiling);
    for (b, &expected) in frontier.iter().enumerate() {
        if tables.best_reward(b) != expected {
            return Ok(Some(format!(
                "DP column {b} holds {} but enumeration finds {expected}",
                tables.best_reward(b)
            )));
        }
    }
    for budget in (0..=ceiling).step_by(2) {
        summary.budget_checks += 1;
        let optimum = frontier[(budget / 2) as usize];
        for alg in Algorithm::BENCHMARKED {
            let res = alg.solve(graph, budget)?;
            if res.cost() > budget || res.cost() != res.solution.recomputed_cost() {
                return Ok(Some(format!(
                    "{alg} at budget {budget} has cost {}",
                    res.cost()
                )));
            }
            if res.reward() > optimum {
                return Ok(Some(format!(
                    "{alg} at budget {budget} beats the optimum: {} > {optimum}",
                    res.reward()
                )));
            }
            let ratio = bench::rho(res.reward(), optimum);
            match alg {
                Algorithm::OptSa if res.reward() != optimum => {
                    return Ok(Some(format!(
                        "optsa at budget {budget} returns {} but enumeration finds {optimum}",
                        res.reward()
                    )))
                }
                Algorithm::ApxMre => summary.min_ratio_apxmre = summary.min_ratio_apxmre.min(ratio),
                Algorithm::ApxMrc => summary.min_ratio_apxmrc = summary.min_ratio_apxmrc.min(ratio),
                _ => {}
            }
            if matches!(alg, Algorithm::ApxMre | Algorithm::ApxMrc) && ratio < APPROX_RATIO {
                return Ok(Some(format!(
                    "{alg} at budget {budget} reaches ratio {ratio} below {APPROX_RATIO}"
                )));
            }
        }
    }
    Ok(None)
}

pub fn cmd_oracle_check(args: &OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let summary = oracle_check(args)?;
    let mut text = format!(
        "oracle-check seed={} trials={} m<={} n<={}\n",
        args.seed, summary.trials, args.m_max, args.n_max
    );
    text.push_str(&format!("budget checks: {}\n", summary.budget_checks));
    text.push_str(&format!(
        "min ratio apxmre: {:.6}\nmin ratio apxmrc: {:.6}\n",
        summary.min_ratio_apxmre, summary.min_ratio_apxmrc
    ));
    match summary.failure {
        None => {
            text.push_str("result: pass\n");
            emit(out, &text)
        }
        Some(detail) => {
            text.push_str("result: FAIL\n");
            emit(out, &text)?;
            Err(CliError::Internal(format!(
                "counterexample found: {detail}"
            )))
        }
    }
}

pub fn cmd_info(args: &InfoArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = read_instance(&args.instance)?;
    let info = json!({
        "m": graph.rows(),
        "n": graph.cols(),
        "total_reward": json_number(graph.total_reward()),
        "full_visit_budget": graph.full_visit_budget(),
        "loose_full_visit_bound": graph.loose_full_visit_bound(),
        "sweep_ceiling": graph.sweep_ceiling(),
    });
    emit(out, &format!("{info}\n"))
}
