//! Throughput and cost metrics, summary aggregation and tournament scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SizeClass;
use crate::harness::{FailureCode, RunRecord};
use crate::kernels::Algorithm;
use crate::report::SystemDescription;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoringError {
    #[error("processing time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("total cost of ownership must be positive, got {0}")]
    NonPositiveCost(f64),
    #[error("cannot summarize an empty sample")]
    Empty,
    #[error("{kind:?} summary needs strictly positive values, got {value}")]
    NonPositiveValue { kind: SummaryKind, value: f64 },
    #[error("throughput summary needs a workload")]
    MissingWorkload,
    #[error("a tournament needs at least two systems")]
    TooFewSystems,
    #[error("system {0:?} entered twice")]
    DuplicateSystem(String),
    #[error("record set is incomplete: {}", .failed.iter().map(|(j, r, c)| format!("{j}#{r} {c}")).collect::<Vec<_>>().join(", "))]
    Incomplete { failed: Vec<(String, u32, FailureCode)> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputMetrics {
    pub eps: f64,
    pub evps: f64,
}

/// Three-year total cost of ownership of the system, in dollars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostConfig {
    pub tco: f64,
}

/// Edges and vertices per second: `(n + m) / t_p`.
pub fn evps(n: u64, m: u64, t_p: f64) -> Result<f64, ScoringError> {
    if !(t_p > 0.0) {
        return Err(ScoringError::NonPositiveTime(t_p));
    }
    Ok((n + m) as f64 / t_p)
}

/// Edges per second: `m / t_p`.
pub fn eps(m: u64, t_p: f64) -> Result<f64, ScoringError> {
    if !(t_p > 0.0) {
        return Err(ScoringError::NonPositiveTime(t_p));
    }
    Ok(m as f64 / t_p)
}

pub fn throughput(n: u64, m: u64, t_p: f64) -> Result<ThroughputMetrics, ScoringError> {
    Ok(ThroughputMetrics {
        eps: eps(m, t_p)?,
        evps: evps(n, m, t_p)?,
    })
}

/// Price per performance: `tco / evps`.
pub fn ppp(cost: &CostConfig, evps: f64) -> Result<f64, ScoringError> {
    if !(cost.tco > 0.0) {
        return Err(ScoringError::NonPositiveCost(cost.tco));
    }
    if !(evps > 0.0) {
        return Err(ScoringError::NonPositiveRate(evps));
    }
    Ok(cost.tco / evps)
}

/// Throughput of a passing run; `None` for failed runs.
pub fn run_throughput(r: &RunRecord) -> Option<ThroughputMetrics> {
    if !r.passed {
        return None;
    }
    throughput(r.vertices, r.edges, r.processing_time).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryKind {
    Performance,
    Throughput,
    Cost,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregationRule {
    ArithmeticMean,
    /// Workload divided by the arithmetic mean of the times.
    WorkloadOverMeanTime,
    HarmonicMean,
    GeometricMean,
}

impl SummaryKind {
    pub fn rule(self) -> AggregationRule {
        match self {
            SummaryKind::Performance => AggregationRule::ArithmeticMean,
            SummaryKind::Throughput => AggregationRule::WorkloadOverMeanTime,
            SummaryKind::Cost => AggregationRule::HarmonicMean,
            SummaryKind::Ratio => AggregationRule::GeometricMean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: SummaryKind,
    pub rule: AggregationRule,
    pub value: f64,
}

pub fn arithmetic_mean(values: &[f64]) -> Result<f64, ScoringError> {
    if values.is_empty() {
        return Err(ScoringError::Empty);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn harmonic_mean(values: &[f64]) -> Result<f64, ScoringError> {
    if values.is_empty() {
        return Err(ScoringError::Empty);
    }
    if let Some(&v) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(ScoringError::NonPositiveValue {
            kind: SummaryKind::Cost,
            value: v,
        });
    }
    Ok(values.len() as f64 / values.iter().map(|v| 1.0 / v).sum::<f64>())
}

pub fn geometric_mean(values: &[f64]) -> Result<f64, ScoringError> {
    if values.is_empty() {
        return Err(ScoringError::Empty);
    }
    if let Some(&v) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(ScoringError::NonPositiveValue {
            kind: SummaryKind::Ratio,
            value: v,
        });
    }
    let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    Ok(mean_log.exp())
}

/// Aggregates `values` with the rule belonging to `kind`.
///
/// For [`SummaryKind::Throughput`], `values` are times and `workload` is
/// the amount of work done in each of them.
pub fn summarize(values: &[f64], kind: SummaryKind, workload: Option<f64>) -> Result<Summary, ScoringError> {
    let value = match kind {
        SummaryKind::Performance => arithmetic_mean(values)?,
        SummaryKind::Throughput => {
            let w = workload.ok_or(ScoringError::MissingWorkload)?;
            let t = arithmetic_mean(values)?;
            if !(t > 0.0) {
                return Err(ScoringError::NonPositiveTime(t));
            }
            w / t
        }
        SummaryKind::Cost => harmonic_mean(values)?,
        SummaryKind::Ratio => geometric_mean(values)?,
    };
    Ok(Summary {
        kind,
        rule: kind.rule(),
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Evps,
    Ppp,
}

impl Criterion {
    pub fn higher_is_better(self) -> bool {
        self == Criterion::Evps
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Evps => "EVPS",
            Criterion::Ppp => "PPP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MatchKey {
    pub algorithm: Algorithm,
    pub dataset: String,
    pub criterion: Criterion,
}

/// One participant's value per match. Missing keys and non-finite values
/// count as failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemResults {
    pub system: String,
    pub values: BTreeMap<MatchKey, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub key: MatchKey,
    pub first: String,
    pub second: String,
    pub first_points: f64,
    pub second_points: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standing {
    pub system: String,
    pub points: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tournament {
    pub participants: Vec<String>,
    pub matches: Vec<MatchKey>,
    pub outcomes: Vec<PairOutcome>,
    /// Descending by points, ties broken by system name.
    pub standings: Vec<Standing>,
}

impl Tournament {
    pub fn total_points(&self) -> f64 {
        self.standings.iter().map(|s| s.points).sum()
    }

    pub fn points_of(&self, system: &str) -> Option<f64> {
        self.standings.iter().find(|s| s.system == system).map(|s| s.points)
    }
}

/// Round-robin scoring: every pair of systems meets once per match.
///
/// The better value wins 1 point, a draw gives 0.5 each. A system without a
/// usable value forfeits to one that has one; if neither has, no points are
/// awarded.
pub fn tournament_score(results: &[SystemResults]) -> Result<Tournament, ScoringError> {
    if results.len() < 2 {
        return Err(ScoringError::TooFewSystems);
    }
    let mut names = BTreeSet::new();
    for r in results {
        if !names.insert(r.system.as_str()) {
            return Err(ScoringError::DuplicateSystem(r.system.clone()));
        }
    }
    let matches: Vec<MatchKey> = results
        .iter()
        .flat_map(|r| r.values.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut totals = vec![0.0f64; results.len()];
    let mut outcomes = Vec::new();
    for key in &matches {
        let usable = |r: &SystemResults| r.values.get(key).copied().filter(|v| v.is_finite());
        for i in 0..results.len() {
            for j in i + 1..results.len() {
                let (pi, pj) = match (usable(&results[i]), usable(&results[j])) {
                    (None, None) => continue,
                    (Some(_), None) => (1.0, 0.0),
                    (None, Some(_)) => (0.0, 1.0),
                    (Some(a), Some(b)) => {
                        if a == b {
                            (0.5, 0.5)
                        } else if (a > b) == key.criterion.higher_is_better() {
                            (1.0, 0.0)
                        } else {
                            (0.0, 1.0)
                        }
                    }
                };
                totals[i] += pi;
                totals[j] += pj;
                outcomes.push(PairOutcome {
                    key: key.clone(),
                    first: results[i].system.clone(),
                    second: results[j].system.clone(),
                    first_points: pi,
                    second_points: pj,
                });
            }
        }
    }
    let mut standings: Vec<Standing> = results
        .iter()
        .zip(&totals)
        .map(|(r, &points)| Standing {
            system: r.system.clone(),
            points,
        })
        .collect();
    standings.sort_by(|a, b| b.points.total_cmp(&a.points).then_with(|| a.system.cmp(&b.system)));
    Ok(Tournament {
        participants: results.iter().map(|r| r.system.clone()).collect(),
        matches,
        outcomes,
        standings,
    })
}

/// Per-job EVPS (and PPP when a cost is known) from a record set, keyed by
/// (algorithm, dataset). Jobs with any failed run are left out.
pub fn match_values(records: &[RunRecord], cost: Option<&CostConfig>) -> BTreeMap<MatchKey, f64> {
    let mut out = BTreeMap::new();
    for job in group_jobs(records) {
        if job.runs.iter().any(|r| !r.passed) {
            continue;
        }
        let Ok(e) = job_evps(&job) else { continue };
        out.insert(
            MatchKey {
                algorithm: job.algorithm,
                dataset: job.dataset.clone(),
                criterion: Criterion::Evps,
            },
            e,
        );
        if let Some(c) = cost {
            if let Ok(p) = ppp(c, e) {
                out.insert(
                    MatchKey {
                        algorithm: job.algorithm,
                        dataset: job.dataset.clone(),
                        criterion: Criterion::Ppp,
                    },
                    p,
                );
            }
        }
    }
    out
}

struct JobRuns<'r> {
    job: &'r str,
    algorithm: Algorithm,
    dataset: String,
    vertices: u64,
    edges: u64,
    runs: Vec<&'r RunRecord>,
}

fn group_jobs(records: &[RunRecord]) -> Vec<JobRuns<'_>> {
    let mut jobs: Vec<JobRuns> = Vec::new();
    for r in records {
        match jobs.iter_mut().find(|j| j.job == r.job) {
            Some(j) => j.runs.push(r),
            None => jobs.push(JobRuns {
                job: &r.job,
                algorithm: r.algorithm,
                dataset: r.dataset.clone(),
                vertices: r.vertices,
                edges: r.edges,
                runs: vec![r],
            }),
        }
    }
    jobs
}

// Work per run divided by the mean processing time of the job's runs.
fn job_evps(job: &JobRuns) -> Result<f64, ScoringError> {
    let times: Vec<f64> = job.runs.iter().map(|r| r.processing_time).collect();
    let s = summarize(&times, SummaryKind::Throughput, Some((job.vertices + job.edges) as f64))?;
    Ok(s.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobSummary {
    pub job: String,
    pub algorithm: Algorithm,
    pub dataset: String,
    pub evps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ppp: Option<f64>,
    pub load_time: f64,
    pub makespan: f64,
    pub processing_time: f64,
}

/// Headline figures of one benchmark execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitionRecord {
    pub system: SystemDescription,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_scale: Option<SizeClass>,
    pub date: String,
    /// Arithmetic mean over jobs of each job's EVPS.
    pub performance: Summary,
    /// Harmonic mean over jobs of each job's PPP.
    #[serde(default)]
    pub cost_performance: Option<Summary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_performance_note: Option<String>,
    pub load_time: Summary,
    pub makespan: Summary,
    pub processing_time: Summary,
    pub jobs: Vec<JobSummary>,
    pub aggregation: String,
}

pub const AGGREGATION_NOTE: &str = "per job: (n + m) / mean processing time; across jobs: arithmetic mean over all jobs jointly (EVPS), harmonic mean (PPP)";
pub const NO_COST_NOTE: &str = "not reported: no cost configuration supplied";

pub fn ldbc_report(
    records: &[RunRecord],
    cost: Option<&CostConfig>,
    system: &SystemDescription,
    target: Option<SizeClass>,
    date: &str,
) -> Result<CompetitionRecord, ScoringError> {
    if records.is_empty() {
        return Err(ScoringError::Empty);
    }
    let failed: Vec<_> = records
        .iter()
        .filter(|r| !r.passed)
        .map(|r| (r.job.clone(), r.run, r.failure.unwrap_or(FailureCode::Execution)))
        .collect();
    if !failed.is_empty() {
        return Err(ScoringError::Incomplete { failed });
    }
    let mut jobs = Vec::new();
    for j in group_jobs(records) {
        let e = job_evps(&j)?;
        let p = cost.map(|c| ppp(c, e)).transpose()?;
        let mean = |f: fn(&RunRecord) -> f64| {
            arithmetic_mean(&j.runs.iter().map(|r| f(r)).collect::<Vec<_>>())
        };
        jobs.push(JobSummary {
            job: j.job.to_string(),
            algorithm: j.algorithm,
            dataset: j.dataset.clone(),
            evps: e,
            ppp: p,
            load_time: mean(|r| r.load_time)?,
            makespan: mean(|r| r.makespan)?,
            processing_time: mean(|r| r.processing_time)?,
        });
    }
    let col = |f: fn(&JobSummary) -> f64| jobs.iter().map(f).collect::<Vec<f64>>();
    let performance = summarize(&col(|j| j.evps), SummaryKind::Performance, None)?;
    let cost_performance = match cost {
        Some(_) => Some(summarize(&col(|j| j.ppp.unwrap_or(f64::NAN)), SummaryKind::Cost, None)?),
        None => None,
    };
    Ok(CompetitionRecord {
        system: system.clone(),
        target_scale: target,
        date: date.to_string(),
        performance,
        cost_performance_note: cost.is_none().then(|| NO_COST_NOTE.to_string()),
        cost_performance,
        load_time: summarize(&col(|j| j.load_time), SummaryKind::Performance, None)?,
        makespan: summarize(&col(|j| j.makespan), SummaryKind::Performance, None)?,
        processing_time: summarize(&col(|j| j.processing_time), SummaryKind::Performance, None)?,
        jobs,
        aggregation: AGGREGATION_NOTE.to_string(),
    })
}
