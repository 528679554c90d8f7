//! Command-line front end. Each subcommand is a thin wrapper over the
//! library operations.

use std::error::Error;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::generator::{busiest_vertex, rmat_generate, stand_ins, RmatParams};
use crate::graph::SizeClass;
use crate::harness::{
    execute_benchmark, materialize_examples, write_dataset, BenchmarkType, Catalog, DatasetKind,
    HarnessConfig, PlanSpec, ReferenceDriver, CATALOG_ENV,
};
use crate::kernels::{Algorithm, ParameterSet};
use crate::report::{emit_result_json, render_summary, Environment, ResultDocument, Resources, SystemDescription};
use crate::scoring::{ldbc_report, match_values, tournament_score, CompetitionRecord, CostConfig, SystemResults, Tournament};
use crate::validator::{read_output_path, validate, MatchRule, ValueKind, EPSILON};

type CliResult = Result<i32, Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(name = "graphalytics", version, about = "Graph analytics benchmark: generate datasets, run, validate and score")]
pub struct Cli {
    /// Log verbosity (error, warn, info, debug, trace); RUST_LOG overrides it.
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate R-MAT datasets with reference outputs and catalog entries.
    Generate(GenerateArgs),
    /// Execute a benchmark plan with the reference driver.
    Run(RunArgs),
    /// Check an output file or directory against reference output.
    Validate(ValidateArgs),
    /// Summarize result documents and rank their systems.
    Score(ScoreArgs),
    /// Print a readable table of a result document.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Directory for the dataset files; `catalog.json` there is created or updated.
    #[arg(long)]
    pub out: PathBuf,
    /// Generate the full stand-in set for a standard benchmark at this class.
    #[arg(long, value_name = "CLASS", conflicts_with_all = ["name"])]
    pub stand_ins: Option<SizeClass>,
    #[arg(long, required_unless_present = "stand_ins")]
    pub name: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub scale_exp: u32,
    #[arg(long, default_value_t = 16)]
    pub edge_factor: u32,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub weighted: bool,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_enum, default_value_t = KindArg::Graph500)]
    pub kind: KindArg,
    /// Class the dataset stands in for, regardless of its size.
    #[arg(long)]
    pub target_class: Option<SizeClass>,
    #[arg(long, default_value_t = 10)]
    pub pr_iterations: u32,
    #[arg(long, default_value_t = 0.85)]
    pub pr_damping: f64,
    #[arg(long, default_value_t = 10)]
    pub cdlp_iterations: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Graph500,
    Datagen,
    Realworld,
}

impl From<KindArg> for DatasetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Graph500 => DatasetKind::Graph500,
            KindArg::Datagen => DatasetKind::Datagen,
            KindArg::Realworld => DatasetKind::RealWorld,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Benchmark type; overrides the plan file.
    #[arg(long = "type", value_name = "TYPE")]
    pub benchmark: Option<BenchmarkType>,
    /// Target class for a standard benchmark (S, M, L or XL).
    #[arg(long)]
    pub target: Option<SizeClass>,
    /// Dataset catalog; defaults to the file named by GRAPHALYTICS_CATALOG.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Declarative plan file (JSON).
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Where to write the result document.
    #[arg(long)]
    pub out: PathBuf,
    /// Scratch space for formatted graphs and run outputs.
    #[arg(long)]
    pub work_dir: Option<PathBuf>,
    /// Per-run timeout in seconds, replacing the benchmark default.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long)]
    pub repetitions: Option<u32>,
    /// Seconds a timed-out run gets to wind down.
    #[arg(long, default_value_t = 30.0)]
    pub grace: f64,
    #[arg(long, default_value = "reference")]
    pub platform: String,
    /// Total cost of ownership in dollars, enabling price-per-performance.
    #[arg(long)]
    pub tco: Option<f64>,
    /// Date recorded in the document (default: now, RFC 3339).
    #[arg(long)]
    pub date: Option<String>,
    /// Tool version recorded in the document.
    #[arg(long)]
    pub tool_version: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Exact,
    Equivalence,
    Epsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindOfValue {
    Int,
    Float,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Match rule; implied by --algorithm when that is given.
    #[arg(long, required_unless_present = "algorithm", conflicts_with = "algorithm")]
    pub rule: Option<RuleArg>,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    /// Value type of the files (default: float for epsilon, int otherwise).
    #[arg(long, value_enum)]
    pub kind: Option<KindOfValue>,
    #[arg(long, default_value_t = EPSILON)]
    pub epsilon: f64,
    pub reference: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Result documents, one per system.
    #[arg(required = true)]
    pub results: Vec<PathBuf>,
    /// Write the scores as JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub result: PathBuf,
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(&cli.log_level))
        .format_timestamp(None)
        .try_init();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Generate(a) => generate(a),
        Command::Run(a) => run(a),
        Command::Validate(a) => validate_cmd(a),
        Command::Score(a) => score(a),
        Command::Report(a) => report(a),
    }
}

fn load_catalog_or_default(path: &Path) -> Result<Catalog, Box<dyn Error>> {
    if path.exists() {
        Ok(Catalog::load(path)?)
    } else {
        Ok(Catalog::default())
    }
}

fn generate(a: GenerateArgs) -> CliResult {
    fs::create_dir_all(&a.out).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let catalog_path = a.out.join("catalog.json");
    let mut catalog = load_catalog_or_default(&catalog_path)?;
    let jobs: Vec<(String, DatasetKind, RmatParams, Option<SizeClass>)> = match a.stand_ins {
        Some(class) => stand_ins(class)
            .into_iter()
            .map(|s| (s.name, s.kind, s.params, Some(class)))
            .collect(),
        None => vec![(
            a.name.clone().expect("clap requires --name"),
            a.kind.into(),
            RmatParams {
                weighted: a.weighted,
                directed: a.directed,
                ..RmatParams::graph500(a.scale_exp, a.edge_factor, a.seed)
            },
            a.target_class,
        )],
    };
    for (name, kind, params, class) in jobs {
        let g = rmat_generate(&params)?;
        let source = busiest_vertex(&g).ok_or("generated graph has no vertices")?;
        let parameters = ParameterSet {
            bfs_source: source,
            sssp_source: source,
            pr_damping: a.pr_damping,
            pr_iterations: a.pr_iterations,
            cdlp_iterations: a.cdlp_iterations,
        };
        let entry = write_dataset(&a.out, &name, kind, &g, parameters, class)?;
        println!("{name}: {} vertices, {} edges", entry.vertices, entry.edges);
        catalog.upsert(entry);
    }
    // Relative paths let the directory move; loading resolves them again.
    let mut relative = catalog;
    for d in &mut relative.datasets {
        for p in [&mut d.vertex_file, &mut d.edge_file, &mut d.reference_dir] {
            if let Ok(rel) = p.strip_prefix(&a.out) {
                *p = rel.to_path_buf();
            }
        }
    }
    relative.save(&catalog_path)?;
    println!("catalog: {}", catalog_path.display());
    Ok(0)
}

fn run(a: RunArgs) -> CliResult {
    let mut spec = match &a.plan {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            serde_json::from_str::<PlanSpec>(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => PlanSpec::default(),
    };
    if a.benchmark.is_some() {
        spec.benchmark = a.benchmark;
    }
    if a.target.is_some() {
        spec.target = a.target;
    }
    if a.repetitions.is_some() {
        spec.repetitions = a.repetitions;
    }
    if a.timeout.is_some() {
        spec.timeout_secs = a.timeout;
    }
    if !(a.grace >= 0.0 && a.grace.is_finite()) {
        return Err(format!("--grace must be a non-negative number of seconds, got {}", a.grace).into());
    }
    if let Some(tco) = a.tco {
        if !(tco > 0.0) {
            return Err(format!("--tco must be positive, got {tco}").into());
        }
    }
    let benchmark = spec.benchmark.unwrap_or(BenchmarkType::Test);
    spec.benchmark = Some(benchmark);
    if benchmark == BenchmarkType::Standard && spec.target.is_none() {
        return Err("a standard benchmark needs --target (S, M, L or XL)".into());
    }

    let scratch;
    let work_dir = match &a.work_dir {
        Some(d) => d.clone(),
        None => {
            scratch = tempfile::Builder::new().prefix("graphalytics-").tempdir()?;
            scratch.path().to_path_buf()
        }
    };
    let catalog_path = a
        .catalog
        .clone()
        .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from));
    let mut catalog = match &catalog_path {
        Some(p) => Catalog::load(p)?,
        None if benchmark == BenchmarkType::Standard => {
            return Err(format!("a standard benchmark needs --catalog or {CATALOG_ENV}").into())
        }
        None => Catalog::default(),
    };
    if benchmark == BenchmarkType::Test {
        catalog.merge(materialize_examples(&work_dir.join("examples"))?);
    }

    let plan = spec.compose(&catalog)?;
    let config = HarnessConfig {
        work_dir: work_dir.join("harness"),
        grace: Duration::from_secs_f64(a.grace),
    };
    log::info!("{} runs planned", plan.run_count());
    let records = execute_benchmark(&plan, &catalog, Arc::new(ReferenceDriver::new()), config)?;
    let system = SystemDescription {
        platform: a.platform.clone(),
        environment: Environment::detect(),
        tool_version: a
            .tool_version
            .clone()
            .unwrap_or_else(|| env!("CARGO_PKG_VERSION").to_string()),
        cost: a.tco.map(|tco| CostConfig { tco }),
    };
    let date = a.date.clone().unwrap_or_else(|| chrono::Utc::now().to_rfc3339());
    let json = emit_result_json(&records, &plan, &system, &Resources::default(), &date)?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&a.out, json).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let failed: Vec<_> = records.iter().filter(|r| !r.passed).collect();
    println!(
        "{}/{} runs passed; results in {}",
        records.len() - failed.len(),
        records.len(),
        a.out.display()
    );
    for r in &failed {
        eprintln!(
            "  {} run {}: {} {}",
            r.job,
            r.run,
            r.failure.map(|c| c.to_string()).unwrap_or_default(),
            r.detail.as_deref().unwrap_or("")
        );
    }
    Ok(if failed.is_empty() { 0 } else { 1 })
}

fn validate_cmd(a: ValidateArgs) -> CliResult {
    let rule = match (a.algorithm, a.rule) {
        (Some(alg), _) => MatchRule::for_algorithm(alg),
        (None, Some(RuleArg::Exact)) => MatchRule::Exact,
        (None, Some(RuleArg::Equivalence)) => MatchRule::Equivalence,
        (None, Some(RuleArg::Epsilon)) => MatchRule::Epsilon { epsilon: a.epsilon },
        (None, None) => unreachable!("clap requires --rule or --algorithm"),
    };
    let kind = match (a.kind, a.algorithm) {
        (Some(KindOfValue::Int), _) => ValueKind::Int,
        (Some(KindOfValue::Float), _) => ValueKind::Float,
        (None, Some(alg)) => ValueKind::of(alg),
        (None, None) => match rule {
            MatchRule::Epsilon { .. } => ValueKind::Float,
            _ => ValueKind::Int,
        },
    };
    let reference = read_output_path(&a.reference, kind)?;
    let output = read_output_path(&a.output, kind)?;
    let verdict = validate(&rule, &reference, &output);
    if verdict.passed {
        println!("pass: {} vertices match ({} rule)", reference.len(), rule.name());
        return Ok(0);
    }
    println!(
        "fail: {} of {} vertices do not match ({} rule)",
        verdict.mismatch_count,
        reference.len(),
        rule.name()
    );
    for m in verdict.mismatches.iter().take(20) {
        let show = |v: Option<crate::validator::Value>| v.map_or("-".to_string(), |v| v.to_string());
        println!("  vertex {}: expected {} got {} ({:?})", m.vertex, show(m.expected), show(m.actual), m.reason);
    }
    Ok(1)
}

#[derive(Debug, Serialize)]
struct Scores {
    competition: Vec<SystemScore>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tournament: Option<Tournament>,
}

#[derive(Debug, Serialize)]
struct SystemScore {
    system: String,
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    record: Option<CompetitionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn score(a: ScoreArgs) -> CliResult {
    let mut entries = Vec::new();
    let mut participants: Vec<SystemResults> = Vec::new();
    for path in &a.results {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let doc = ResultDocument::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let records = doc.records();
        let sut = &doc.system_under_test;
        let mut name = sut.platform.clone();
        if participants.iter().any(|p| p.system == name) {
            name = format!("{name} ({})", path.display());
        }
        let (record, note) = match ldbc_report(
            &records,
            sut.cost.as_ref(),
            sut,
            doc.benchmark_configuration.target_scale,
            &doc.benchmark_configuration.date,
        ) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        entries.push(SystemScore {
            system: name.clone(),
            source: path.display().to_string(),
            record,
            note,
        });
        participants.push(SystemResults {
            system: name,
            values: match_values(&records, sut.cost.as_ref()),
        });
    }
    let tournament = if participants.len() >= 2 {
        Some(tournament_score(&participants)?)
    } else {
        None
    };
    let scores = Scores {
        competition: entries,
        tournament,
    };
    let json = serde_json::to_string_pretty(&scores)? + "\n";
    match &a.out {
        Some(p) => fs::write(p, &json).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{json}"),
    }
    if let Some(t) = &scores.tournament {
        eprintln!("standings ({} matches):", t.matches.len());
        for s in &t.standings {
            eprintln!("  {:>8.1}  {}", s.points, s.system);
        }
    }
    Ok(0)
}

fn report(a: ReportArgs) -> CliResult {
    let text = fs::read_to_string(&a.result).map_err(|e| format!("{}: {e}", a.result.display()))?;
    let doc = ResultDocument::from_json(&text).map_err(|e| format!("{}: {e}", a.result.display()))?;
    print!("{}", render_summary(&doc));
    Ok(0)
}
