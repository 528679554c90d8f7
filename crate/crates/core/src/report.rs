//! The result document: system under test, benchmark configuration and
//! per-run results, serialized as JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SizeClass;
use crate::harness::{BenchmarkPlan, BenchmarkType, FailureCode, RunRecord};
use crate::kernels::{Algorithm, KernelParams};
use crate::scoring::{ldbc_report, CompetitionRecord, CostConfig};
use crate::validator::{Mismatch, MismatchReason};

/// Document format version written to every result file.
pub const FORMAT_VERSION: u32 = 1;

/// Mismatches copied into the result document per run.
pub const REPORTED_MISMATCHES: usize = 10;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no record for job {job:?} run {run}")]
    MissingRun { job: String, run: u32 },
    #[error("record for job {job:?} run {run} appears more than once")]
    DuplicateRun { job: String, run: u32 },
    #[error("record for job {job:?} run {run} is not part of the plan")]
    UnplannedRun { job: String, run: u32 },
    #[error("invalid result document: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Environment {
    pub cpu_count: u32,
    pub cpu_type: String,
    pub memory_bytes: u64,
    pub network: String,
}

impl Environment {
    /// Best-effort description of the machine this process runs on.
    pub fn detect() -> Environment {
        let cpu_count = std::thread::available_parallelism().map_or(1, |n| n.get() as u32);
        let cpuinfo = std::fs::read_to_string("/proc/cpuinfo").unwrap_or_default();
        let cpu_type = cpuinfo
            .lines()
            .find_map(|l| l.strip_prefix("model name")?.split_once(':').map(|(_, v)| v.trim().to_string()))
            .unwrap_or_else(|| std::env::consts::ARCH.to_string());
        let meminfo = std::fs::read_to_string("/proc/meminfo").unwrap_or_default();
        let memory_bytes = meminfo
            .lines()
            .find_map(|l| l.strip_prefix("MemTotal:"))
            .and_then(|v| v.trim().trim_end_matches("kB").trim().parse::<u64>().ok())
            .map_or(0, |kb| kb * 1024);
        Environment {
            cpu_count,
            cpu_type,
            memory_bytes,
            network: "none (single machine)".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDescription {
    pub platform: String,
    pub environment: Environment,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resources {
    pub machines: u32,
    pub threads: u32,
    /// Whether this is a scalability (multi-size deployment) run.
    pub scalability: bool,
}

impl Default for Resources {
    fn default() -> Self {
        Resources {
            machines: 1,
            threads: 1,
            scalability: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfiguration {
    #[serde(rename = "type")]
    pub benchmark: BenchmarkType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_scale: Option<SizeClass>,
    pub resources: Resources,
    pub date: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchEntry {
    pub vertex: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    pub reason: MismatchReason,
}

impl From<&Mismatch> for MismatchEntry {
    fn from(m: &Mismatch) -> Self {
        MismatchEntry {
            vertex: m.vertex,
            expected: m.expected.map(|v| v.to_string()),
            actual: m.actual.map(|v| v.to_string()),
            reason: m.reason,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: u32,
    pub load_time: f64,
    pub makespan: f64,
    pub processing_time: f64,
    pub passed: bool,
    pub sla_breached: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureCode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<MismatchEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobResult {
    pub id: String,
    pub algorithm: Algorithm,
    pub dataset: String,
    pub vertices: u64,
    pub edges: u64,
    pub parameters: KernelParams,
    pub repetitions: u32,
    pub timeout_secs: f64,
    pub runs: Vec<RunResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub jobs: Vec<JobResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResults {
    pub experiments: Vec<ExperimentResult>,
    /// Headline figures; present only when every run passed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<CompetitionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format_version: u32,
    pub system_under_test: SystemDescription,
    pub benchmark_configuration: BenchmarkConfiguration,
    pub experiment_results: ExperimentResults,
}

impl ResultDocument {
    /// Assembles a document, checking that `records` cover the plan exactly.
    pub fn build(
        records: &[RunRecord],
        plan: &BenchmarkPlan,
        system: &SystemDescription,
        resources: &Resources,
        date: &str,
    ) -> Result<ResultDocument, ReportError> {
        let mut by_run: BTreeMap<(&str, u32), &RunRecord> = BTreeMap::new();
        for r in records {
            if by_run.insert((r.job.as_str(), r.run), r).is_some() {
                return Err(ReportError::DuplicateRun {
                    job: r.job.clone(),
                    run: r.run,
                });
            }
        }
        let mut used = 0usize;
        let mut experiments = Vec::new();
        for e in &plan.experiments {
            let mut jobs = Vec::new();
            for j in &e.jobs {
                let mut runs = Vec::new();
                let (mut vertices, mut edges) = (0, 0);
                for run in 0..j.repetitions {
                    let r = by_run.get(&(j.id.as_str(), run)).ok_or_else(|| ReportError::MissingRun {
                        job: j.id.clone(),
                        run,
                    })?;
                    used += 1;
                    (vertices, edges) = (r.vertices, r.edges);
                    runs.push(RunResult {
                        run,
                        load_time: r.load_time,
                        makespan: r.makespan,
                        processing_time: r.processing_time,
                        passed: r.passed,
                        sla_breached: r.sla_breached(),
                        failure: r.failure,
                        detail: r.detail.clone(),
                        mismatch_count: r.validation.as_ref().map(|v| v.mismatch_count),
                        mismatches: r
                            .validation
                            .iter()
                            .flat_map(|v| v.mismatches.iter().take(REPORTED_MISMATCHES))
                            .map(MismatchEntry::from)
                            .collect(),
                    });
                }
                jobs.push(JobResult {
                    id: j.id.clone(),
                    algorithm: j.algorithm,
                    dataset: j.dataset.clone(),
                    vertices,
                    edges,
                    parameters: j.parameters,
                    repetitions: j.repetitions,
                    timeout_secs: j.timeout_secs,
                    runs,
                });
            }
            experiments.push(ExperimentResult {
                name: e.name.clone(),
                jobs,
            });
        }
        if used != records.len() {
            let planned: std::collections::BTreeSet<(&str, u32)> = plan.runs().map(|(_, j, r)| (j.id.as_str(), r)).collect();
            let stray = records
                .iter()
                .find(|r| !planned.contains(&(r.job.as_str(), r.run)))
                .expect("an unplanned record exists");
            return Err(ReportError::UnplannedRun {
                job: stray.job.clone(),
                run: stray.run,
            });
        }
        let summary = ldbc_report(records, system.cost.as_ref(), system, plan.target, date).ok();
        Ok(ResultDocument {
            format_version: FORMAT_VERSION,
            system_under_test: system.clone(),
            benchmark_configuration: BenchmarkConfiguration {
                benchmark: plan.benchmark,
                target_scale: plan.target,
                resources: resources.clone(),
                date: date.to_string(),
            },
            experiment_results: ExperimentResults { experiments, summary },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result document serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<ResultDocument, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn run_count(&self) -> usize {
        self.experiment_results
            .experiments
            .iter()
            .flat_map(|e| &e.jobs)
            .map(|j| j.runs.len())
            .sum()
    }

    /// Rebuilds run records (without mismatch detail) for scoring.
    pub fn records(&self) -> Vec<RunRecord> {
        let mut out = Vec::new();
        for e in &self.experiment_results.experiments {
            for j in &e.jobs {
                for r in &j.runs {
                    out.push(RunRecord {
                        experiment: e.name.clone(),
                        job: j.id.clone(),
                        run: r.run,
                        algorithm: j.algorithm,
                        dataset: j.dataset.clone(),
                        vertices: j.vertices,
                        edges: j.edges,
                        load_time: r.load_time,
                        makespan: r.makespan,
                        processing_time: r.processing_time,
                        passed: r.passed,
                        failure: r.failure,
                        detail: r.detail.clone(),
                        validation: None,
                    });
                }
            }
        }
        out
    }
}

/// Emits the result document for `records` as pretty-printed JSON.
pub fn emit_result_json(
    records: &[RunRecord],
    plan: &BenchmarkPlan,
    system: &SystemDescription,
    resources: &Resources,
    date: &str,
) -> Result<String, ReportError> {
    Ok(ResultDocument::build(records, plan, system, resources, date)?.to_json())
}

/// The JSON Schema describing [`ResultDocument`].
pub const RESULT_SCHEMA: &str = include_str!("../../../docs/result-schema.json");

fn secs(t: f64) -> String {
    if t >= 1.0 {
        format!("{t:.3} s")
    } else {
        format!("{:.3} ms", t * 1e3)
    }
}

/// Plain-text table of every run followed by the headline figures.
pub fn render_summary(doc: &ResultDocument) -> String {
    let mut s = String::new();
    let cfg = &doc.benchmark_configuration;
    let sut = &doc.system_under_test;
    let target = cfg.target_scale.map(|t| format!(" target {t}")).unwrap_or_default();
    writeln!(s, "{} benchmark{target} on {} ({}), {}", cfg.benchmark, sut.platform, sut.tool_version, cfg.date).unwrap();
    writeln!(
        s,
        "{:<32} {:>3} {:>12} {:>12} {:>12}  status",
        "job", "run", "T_l", "T_m", "T_p"
    )
    .unwrap();
    let (mut passed, mut total) = (0, 0);
    for e in &doc.experiment_results.experiments {
        for j in &e.jobs {
            for r in &j.runs {
                total += 1;
                let status = match r.failure {
                    None => {
                        passed += 1;
                        "pass".to_string()
                    }
                    Some(code) => format!("{code} {}", r.detail.as_deref().unwrap_or("")),
                };
                writeln!(
                    s,
                    "{:<32} {:>3} {:>12} {:>12} {:>12}  {}",
                    j.id,
                    r.run,
                    secs(r.load_time),
                    secs(r.makespan),
                    secs(r.processing_time),
                    status.trim_end()
                )
                .unwrap();
            }
        }
    }
    writeln!(s, "{passed}/{total} runs passed").unwrap();
    if let Some(sum) = &doc.experiment_results.summary {
        writeln!(s, "EVPS (mean over jobs): {:.6e}", sum.performance.value).unwrap();
        match &sum.cost_performance {
            Some(c) => writeln!(s, "PPP (harmonic mean): {:.6e}", c.value).unwrap(),
            None => writeln!(s, "PPP: {}", sum.cost_performance_note.as_deref().unwrap_or("not reported")).unwrap(),
        }
        writeln!(
            s,
            "mean T_l {}, T_m {}, T_p {}",
            secs(sum.load_time.value),
            secs(sum.makespan.value),
            secs(sum.processing_time.value)
        )
        .unwrap();
    }
    s
}
