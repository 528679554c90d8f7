use std::collections::HashMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::mpsc::{self, RecvTimeoutError};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::catalog::{Catalog, DatasetEntry};
use super::driver::{read_timing_log, CancelToken, DriverError, FormattedGraph, PlatformDriver, RunContext};
use super::plan::{BenchmarkJob, BenchmarkPlan, PlanError};
use super::{classify_failure, FailureCause, FailureCode, LifecycleStep};
use crate::graph::format_graph;
use crate::validator::{read_output_path, validate, MatchRule, OutputError, ValueKind, Verdict};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("driver {driver:?} failed setup verification ({code}): {reason}")]
    Setup {
        driver: String,
        code: FailureCode,
        reason: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    /// Formatted graphs and per-run output and log directories go here.
    pub work_dir: PathBuf,
    /// How long a timed-out run may take to wind down after being terminated.
    pub grace: Duration,
}

impl HarnessConfig {
    pub fn new(work_dir: impl Into<PathBuf>) -> HarnessConfig {
        HarnessConfig {
            work_dir: work_dir.into(),
            grace: Duration::from_secs(30),
        }
    }
}

/// Outcome of one run. Times are in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub job: String,
    pub run: u32,
    pub algorithm: crate::kernels::Algorithm,
    pub dataset: String,
    pub vertices: u64,
    pub edges: u64,
    pub load_time: f64,
    pub makespan: f64,
    pub processing_time: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureCode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<Verdict>,
}

impl RunRecord {
    pub fn sla_breached(&self) -> bool {
        self.failure == Some(FailureCode::Timeout)
    }

    /// Makespan minus processing time.
    pub fn overhead(&self) -> f64 {
        self.makespan - self.processing_time
    }
}

/// A dataset that has been formatted and loaded into the driver.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub entry: DatasetEntry,
    pub formatted: FormattedGraph,
    pub load_time: f64,
}

fn guarded<T>(f: impl FnOnce() -> Result<T, DriverError>) -> Result<T, (FailureCause, String)> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => Err((FailureCause::Error, e.0)),
        Err(p) => Err((FailureCause::Panic, panic_message(p))),
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    let msg = p
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into());
    format!("panicked: {msg}")
}

struct Outcome {
    failure: Option<(FailureCode, String)>,
}

impl Outcome {
    fn fail(&mut self, step: LifecycleStep, cause: FailureCause, msg: impl Into<String>) {
        if self.failure.is_none() {
            let code = classify_failure(step, cause);
            self.failure = Some((code, format!("{step:?}: {}", msg.into())));
        }
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

pub struct Harness {
    driver: Arc<dyn PlatformDriver>,
    config: HarnessConfig,
}

impl Harness {
    pub fn new(driver: Arc<dyn PlatformDriver>, config: HarnessConfig) -> Harness {
        Harness { driver, config }
    }

    /// Runs every planned run and returns one record per run, in plan order.
    ///
    /// Each dataset is formatted and loaded once before its runs and deleted
    /// after the last of them.
    pub fn execute_benchmark(&self, plan: &BenchmarkPlan, catalog: &Catalog) -> Result<Vec<RunRecord>, HarnessError> {
        plan.check_against(catalog)?;
        if let Err((cause, reason)) = guarded(|| self.driver.verify_setup()) {
            return Err(HarnessError::Setup {
                driver: self.driver.name().to_string(),
                code: classify_failure(LifecycleStep::VerifySetup, cause),
                reason,
            });
        }
        let runs: Vec<_> = plan.runs().collect();
        let mut records: Vec<Option<RunRecord>> = vec![None; runs.len()];
        for name in plan.datasets() {
            let entry = catalog.get(name).map_err(PlanError::from)?;
            let mine: Vec<usize> = (0..runs.len()).filter(|&i| runs[i].1.dataset == name).collect();
            match self.load_dataset(entry) {
                Ok(loaded) => {
                    for &i in &mine {
                        let (exp, job, r) = runs[i];
                        records[i] = Some(self.execute_run(&exp.name, job, r, &loaded));
                    }
                    if let Err((_, msg)) = guarded(|| self.driver.delete_graph(name)) {
                        log::warn!("delete-graph {name}: {msg}");
                    }
                }
                Err((code, detail)) => {
                    log::error!("dataset {name}: {detail}");
                    for &i in &mine {
                        let (exp, job, r) = runs[i];
                        records[i] = Some(failed_record(&exp.name, job, r, entry, code, detail.clone()));
                    }
                }
            }
        }
        Ok(records.into_iter().map(|r| r.expect("every run recorded")).collect())
    }

    /// Minimizes the dataset's files, then hands them to the driver.
    pub fn load_dataset(&self, entry: &DatasetEntry) -> Result<LoadedDataset, (FailureCode, String)> {
        let dat = |step, cause, msg: String| (classify_failure(step, cause), format!("{step:?}: {msg}"));
        let dir = self.config.work_dir.join("formatted");
        fs::create_dir_all(&dir).map_err(|e| dat(LifecycleStep::FormatGraph, FailureCause::Error, e.to_string()))?;
        let vertex_file = dir.join(format!("{}.v", entry.name));
        let edge_file = dir.join(format!("{}.e", entry.name));
        let g = format_graph(
            (&entry.vertex_file, &entry.edge_file),
            entry.directed,
            entry.weighted,
            entry.weighted,
            (&vertex_file, &edge_file),
        )
        .map_err(|e| dat(LifecycleStep::FormatGraph, FailureCause::Error, e.to_string()))?;
        let formatted = FormattedGraph {
            name: entry.name.clone(),
            vertex_file,
            edge_file,
            directed: entry.directed,
            weighted: entry.weighted,
            vertices: g.vertex_count() as u64,
            edges: g.edge_count() as u64,
        };
        drop(g);
        guarded(|| self.driver.format_graph(&formatted))
            .map_err(|(c, m)| dat(LifecycleStep::FormatGraph, c, m))?;
        let start = Instant::now();
        guarded(|| self.driver.load_graph(&formatted)).map_err(|(c, m)| dat(LifecycleStep::LoadGraph, c, m))?;
        Ok(LoadedDataset {
            entry: entry.clone(),
            formatted,
            load_time: start.elapsed().as_secs_f64(),
        })
    }

    /// Executes one run of `job` on an already loaded dataset.
    pub fn execute_run(&self, experiment: &str, job: &BenchmarkJob, run: u32, data: &LoadedDataset) -> RunRecord {
        let run_dir = self.config.work_dir.join("runs").join(&job.id).join(format!("run-{run}"));
        let ctx = RunContext {
            job: job.id.clone(),
            run,
            algorithm: job.algorithm,
            parameters: job.parameters,
            dataset: job.dataset.clone(),
            output_dir: run_dir.join("output"),
            log_dir: run_dir.join("log"),
        };
        let mut rec = RunRecord {
            experiment: experiment.to_string(),
            job: job.id.clone(),
            run,
            algorithm: job.algorithm,
            dataset: job.dataset.clone(),
            vertices: data.formatted.vertices,
            edges: data.formatted.edges,
            load_time: data.load_time,
            makespan: 0.0,
            processing_time: 0.0,
            passed: false,
            failure: None,
            detail: None,
            validation: None,
        };
        let mut out = Outcome { failure: None };

        if let Err(e) = reset_dir(&ctx.output_dir).and_then(|_| reset_dir(&ctx.log_dir)) {
            out.fail(LifecycleStep::Prepare, FailureCause::Error, e);
        }
        if !out.failed() {
            if let Err((cause, msg)) = guarded(|| self.driver.prepare(&ctx)) {
                out.fail(LifecycleStep::Prepare, cause, msg);
            }
        }
        if !out.failed() {
            if let Err((cause, msg)) = guarded(|| self.driver.startup(&ctx)) {
                out.fail(LifecycleStep::Startup, cause, msg);
            }
        }

        if !out.failed() {
            let timeout = Duration::from_secs_f64(job.timeout_secs);
            match self.run_with_deadline(&ctx, timeout) {
                RunEnd::Finished(elapsed) => rec.makespan = elapsed,
                RunEnd::Failed(elapsed, cause, msg) => {
                    rec.makespan = elapsed;
                    out.fail(LifecycleStep::Run, cause, msg);
                }
                RunEnd::TimedOut => {
                    rec.makespan = job.timeout_secs;
                    rec.processing_time = job.timeout_secs;
                    out.fail(
                        LifecycleStep::Run,
                        FailureCause::DeadlineExceeded,
                        format!("no result within {} s", job.timeout_secs),
                    );
                    return finish(rec, out);
                }
            }
            if !out.failed() {
                self.validate_run(&ctx, data, &mut rec, &mut out);
            }
        }

        if let Err((cause, msg)) = guarded(|| self.driver.finalize(&ctx)) {
            out.fail(LifecycleStep::Finalize, cause, msg);
        }

        if rec.makespan > 0.0 || !out.failed() {
            match read_timing_log(&ctx.log_dir) {
                Ok(t) if t <= rec.makespan => rec.processing_time = t,
                Ok(t) => out.fail(
                    LifecycleStep::Archive,
                    FailureCause::MissingMetrics,
                    format!("processing time {t} s exceeds makespan {} s", rec.makespan),
                ),
                Err(msg) => out.fail(LifecycleStep::Archive, FailureCause::MissingMetrics, msg),
            }
        }
        finish(rec, out)
    }

    fn run_with_deadline(&self, ctx: &RunContext, timeout: Duration) -> RunEnd {
        let cancel = CancelToken::default();
        let (tx, rx) = mpsc::channel();
        let driver = Arc::clone(&self.driver);
        let (thread_ctx, thread_cancel) = (ctx.clone(), cancel.clone());
        let start = Instant::now();
        let spawned = thread::Builder::new()
            .name(format!("run-{}-{}", ctx.job, ctx.run))
            .spawn(move || {
                let r = guarded(|| driver.run(&thread_ctx, &thread_cancel));
                let _ = tx.send(r);
            });
        if let Err(e) = spawned {
            return RunEnd::Failed(0.0, FailureCause::Error, format!("cannot start run: {e}"));
        }
        match rx.recv_timeout(timeout) {
            Ok(Ok(())) => RunEnd::Finished(start.elapsed().as_secs_f64()),
            Ok(Err((cause, msg))) => RunEnd::Failed(start.elapsed().as_secs_f64(), cause, msg),
            Err(RecvTimeoutError::Disconnected) => {
                RunEnd::Failed(start.elapsed().as_secs_f64(), FailureCause::Panic, "run thread vanished".into())
            }
            Err(RecvTimeoutError::Timeout) => {
                cancel.cancel();
                if let Err((_, msg)) = guarded(|| {
                    self.driver.terminate(ctx);
                    Ok(())
                }) {
                    log::warn!("terminate {}: {msg}", ctx.job);
                }
                if rx.recv_timeout(self.config.grace).is_err() {
                    log::warn!("run {} #{} still busy after grace period; detached", ctx.job, ctx.run);
                }
                RunEnd::TimedOut
            }
        }
    }

    fn validate_run(&self, ctx: &RunContext, data: &LoadedDataset, rec: &mut RunRecord, out: &mut Outcome) {
        let kind = ValueKind::of(ctx.algorithm);
        let reference = match read_output_path(&data.entry.reference_path(ctx.algorithm), kind) {
            Ok(r) => r,
            Err(e) => {
                out.fail(LifecycleStep::LoadGraph, FailureCause::Error, format!("reference output: {e}"));
                return;
            }
        };
        let actual = match read_output_path(&ctx.output_dir, kind) {
            Ok(a) => a,
            Err(e) => {
                let cause = match e {
                    OutputError::Missing(_) => FailureCause::MissingOutput,
                    _ => FailureCause::PartialOutput,
                };
                out.fail(LifecycleStep::Validate, cause, e.to_string());
                return;
            }
        };
        let verdict = validate(&MatchRule::for_algorithm(ctx.algorithm), &reference, &actual);
        if !reference.same_vertices(&actual) {
            out.fail(
                LifecycleStep::Validate,
                FailureCause::PartialOutput,
                format!("output covers {} vertices, reference {}", actual.len(), reference.len()),
            );
        } else if !verdict.passed {
            out.fail(
                LifecycleStep::Validate,
                FailureCause::Mismatch,
                format!("{} of {} vertices differ", verdict.mismatch_count, reference.len()),
            );
        }
        rec.validation = Some(verdict);
    }
}

enum RunEnd {
    Finished(f64),
    Failed(f64, FailureCause, String),
    TimedOut,
}

fn finish(mut rec: RunRecord, out: Outcome) -> RunRecord {
    match out.failure {
        Some((code, detail)) => {
            rec.passed = false;
            rec.failure = Some(code);
            rec.detail = Some(detail);
        }
        None => rec.passed = true,
    }
    rec
}

fn reset_dir(p: &Path) -> Result<(), String> {
    if p.exists() {
        fs::remove_dir_all(p).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    fs::create_dir_all(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn failed_record(
    experiment: &str,
    job: &BenchmarkJob,
    run: u32,
    entry: &DatasetEntry,
    code: FailureCode,
    detail: String,
) -> RunRecord {
    RunRecord {
        experiment: experiment.to_string(),
        job: job.id.clone(),
        run,
        algorithm: job.algorithm,
        dataset: job.dataset.clone(),
        vertices: entry.vertices,
        edges: entry.edges,
        load_time: 0.0,
        makespan: 0.0,
        processing_time: 0.0,
        passed: false,
        failure: Some(code),
        detail: Some(detail),
        validation: None,
    }
}

pub fn execute_benchmark(
    plan: &BenchmarkPlan,
    catalog: &Catalog,
    driver: Arc<dyn PlatformDriver>,
    config: HarnessConfig,
) -> Result<Vec<RunRecord>, HarnessError> {
    Harness::new(driver, config).execute_benchmark(plan, catalog)
}

/// Per-job arithmetic means of load time, makespan and processing time.
pub fn job_means(records: &[RunRecord]) -> HashMap<&str, (f64, f64, f64)> {
    let mut acc: HashMap<&str, (f64, f64, f64, usize)> = HashMap::new();
    for r in records {
        let e = acc.entry(r.job.as_str()).or_default();
        e.0 += r.load_time;
        e.1 += r.makespan;
        e.2 += r.processing_time;
        e.3 += 1;
    }
    acc.into_iter()
        .map(|(k, (l, m, p, n))| (k, (l / n as f64, m / n as f64, p / n as f64)))
        .collect()
}
