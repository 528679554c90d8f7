use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::catalog::{Catalog, CatalogError, DatasetEntry, DatasetKind};
use crate::generator::ExampleGraphId;
use crate::graph::SizeClass;
use crate::kernels::{Algorithm, KernelParams};

pub const TEST_TIMEOUT_SECS: f64 = 600.0;
pub const STANDARD_DATASETS: usize = 5;
pub const STANDARD_REPETITIONS: u32 = 5;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("target {0} has no standard benchmark (choose S, M, L or XL)")]
    UnsupportedTarget(SizeClass),
    #[error("{algorithm} needs {needed} datasets at {target} but the catalog offers {found}")]
    InsufficientCoverage {
        algorithm: Algorithm,
        target: SizeClass,
        needed: usize,
        found: usize,
    },
    #[error("{algorithm} cannot run on dataset {dataset:?}: {reason}")]
    Unsuitable {
        algorithm: Algorithm,
        dataset: String,
        reason: String,
    },
    #[error("job {job:?}: {reason}")]
    InvalidJob { job: String, reason: String },
    #[error("a standard benchmark needs a target scale")]
    MissingTarget,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkType {
    Test,
    Standard,
}

impl fmt::Display for BenchmarkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchmarkType::Test => "test",
            BenchmarkType::Standard => "standard",
        })
    }
}

impl FromStr for BenchmarkType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "test" => Ok(BenchmarkType::Test),
            "standard" => Ok(BenchmarkType::Standard),
            _ => Err(format!("unknown benchmark type {s:?} (expected test or standard)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkJob {
    pub id: String,
    pub algorithm: Algorithm,
    pub dataset: String,
    pub parameters: KernelParams,
    pub repetitions: u32,
    pub timeout_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub name: String,
    pub jobs: Vec<BenchmarkJob>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkPlan {
    pub benchmark: BenchmarkType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SizeClass>,
    pub experiments: Vec<Experiment>,
}

impl BenchmarkPlan {
    pub fn jobs(&self) -> impl Iterator<Item = (&Experiment, &BenchmarkJob)> {
        self.experiments
            .iter()
            .flat_map(|e| e.jobs.iter().map(move |j| (e, j)))
    }

    pub fn job_count(&self) -> usize {
        self.experiments.iter().map(|e| e.jobs.len()).sum()
    }

    pub fn run_count(&self) -> usize {
        self.jobs().map(|(_, j)| j.repetitions as usize).sum()
    }

    /// Planned runs in order: experiments, then jobs, then repetitions.
    pub fn runs(&self) -> impl Iterator<Item = (&Experiment, &BenchmarkJob, u32)> {
        self.jobs()
            .flat_map(|(e, j)| (0..j.repetitions).map(move |r| (e, j, r)))
    }

    /// Distinct datasets in order of first use.
    pub fn datasets(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.jobs()
            .map(|(_, j)| j.dataset.as_str())
            .filter(|d| seen.insert(*d))
            .collect()
    }

    pub fn check(&self) -> Result<(), PlanError> {
        let mut ids = BTreeSet::new();
        for (_, j) in self.jobs() {
            let invalid = |reason: &str| PlanError::InvalidJob {
                job: j.id.clone(),
                reason: reason.to_string(),
            };
            if !ids.insert(j.id.as_str()) {
                return Err(invalid("duplicate job id"));
            }
            if j.repetitions == 0 {
                return Err(invalid("repetitions must be at least 1"));
            }
            if !(j.timeout_secs > 0.0 && j.timeout_secs.is_finite()) {
                return Err(invalid("timeout must be a positive number of seconds"));
            }
            if j.parameters.algorithm() != j.algorithm {
                return Err(invalid("parameters belong to another algorithm"));
            }
        }
        Ok(())
    }

    /// Verifies every job against the catalog: datasets exist and SSSP only
    /// sees weighted graphs.
    pub fn check_against(&self, catalog: &Catalog) -> Result<(), PlanError> {
        self.check()?;
        for (_, j) in self.jobs() {
            let d = catalog.get(&j.dataset)?;
            if !d.supports(j.algorithm) {
                return Err(PlanError::Unsuitable {
                    algorithm: j.algorithm,
                    dataset: d.name.clone(),
                    reason: "dataset has no edge weights".into(),
                });
            }
        }
        Ok(())
    }
}

fn job_for(algorithm: Algorithm, d: &DatasetEntry, repetitions: u32, timeout_secs: f64) -> BenchmarkJob {
    BenchmarkJob {
        id: format!("{}-{}", algorithm.name(), d.name),
        algorithm,
        dataset: d.name.clone(),
        parameters: d.parameters.for_algorithm(algorithm),
        repetitions,
        timeout_secs,
    }
}

/// All six algorithms on each example graph, once, with a ten-minute timeout.
pub fn compose_test_benchmark() -> BenchmarkPlan {
    let experiments = ExampleGraphId::ALL
        .into_iter()
        .map(|id| Experiment {
            name: if id.is_directed() { "directed" } else { "undirected" }.to_string(),
            jobs: Algorithm::ALL
                .into_iter()
                .map(|a| BenchmarkJob {
                    id: format!("{}-{}", a.name(), id.name()),
                    algorithm: a,
                    dataset: id.name().to_string(),
                    parameters: id.parameters().for_algorithm(a),
                    repetitions: 1,
                    timeout_secs: TEST_TIMEOUT_SECS,
                })
                .collect(),
        })
        .collect();
    BenchmarkPlan {
        benchmark: BenchmarkType::Test,
        target: None,
        experiments,
    }
}

pub fn standard_timeout_secs(target: SizeClass) -> Result<f64, PlanError> {
    Ok(match target {
        SizeClass::S => 900.0,
        SizeClass::M => 1800.0,
        SizeClass::L => 3600.0,
        SizeClass::XL => 7200.0,
        other => return Err(PlanError::UnsupportedTarget(other)),
    })
}

/// Chooses the datasets for one algorithm at one target class.
///
/// Up to two real-world graphs and one Graph500 graph (never for SSSP) are
/// taken first, largest first; Datagen graphs, largest first, fill the
/// remaining slots.
pub fn select_datasets(
    catalog: &Catalog,
    target: SizeClass,
    algorithm: Algorithm,
) -> Result<Vec<&DatasetEntry>, PlanError> {
    let pool = |kind: DatasetKind| {
        let mut v: Vec<&DatasetEntry> = catalog
            .datasets
            .iter()
            .filter(|d| d.kind == kind && d.class() == Some(target) && d.supports(algorithm))
            .collect();
        v.sort_by(|a, b| {
            (b.vertices + b.edges)
                .cmp(&(a.vertices + a.edges))
                .then_with(|| a.name.cmp(&b.name))
        });
        v
    };
    let mut chosen: Vec<&DatasetEntry> = pool(DatasetKind::RealWorld).into_iter().take(2).collect();
    if algorithm != Algorithm::Sssp {
        chosen.extend(pool(DatasetKind::Graph500).into_iter().take(1));
    }
    let open = STANDARD_DATASETS.saturating_sub(chosen.len());
    chosen.extend(pool(DatasetKind::Datagen).into_iter().take(open));
    if chosen.len() < STANDARD_DATASETS {
        return Err(PlanError::InsufficientCoverage {
            algorithm,
            target,
            needed: STANDARD_DATASETS,
            found: chosen.len(),
        });
    }
    Ok(chosen)
}

/// One experiment per algorithm, five datasets each, five repetitions per job.
pub fn compose_standard_benchmark(target: SizeClass, catalog: &Catalog) -> Result<BenchmarkPlan, PlanError> {
    let timeout = standard_timeout_secs(target)?;
    let mut experiments = Vec::new();
    for a in Algorithm::ALL {
        let datasets = select_datasets(catalog, target, a)?;
        experiments.push(Experiment {
            name: a.name().to_string(),
            jobs: datasets
                .into_iter()
                .map(|d| job_for(a, d, STANDARD_REPETITIONS, timeout))
                .collect(),
        });
    }
    Ok(BenchmarkPlan {
        benchmark: BenchmarkType::Standard,
        target: Some(target),
        experiments,
    })
}

/// Declarative plan file: benchmark type and target plus optional overrides.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanSpec {
    #[serde(rename = "type")]
    pub benchmark: Option<BenchmarkType>,
    #[serde(default)]
    pub target: Option<SizeClass>,
    #[serde(default)]
    pub repetitions: Option<u32>,
    #[serde(default)]
    pub timeout_secs: Option<f64>,
    /// Explicit dataset lists per algorithm, replacing automatic selection.
    #[serde(default)]
    pub datasets: BTreeMap<Algorithm, Vec<String>>,
}

impl PlanSpec {
    pub fn compose(&self, catalog: &Catalog) -> Result<BenchmarkPlan, PlanError> {
        let benchmark = self.benchmark.unwrap_or(BenchmarkType::Test);
        let mut plan = match benchmark {
            BenchmarkType::Test => compose_test_benchmark(),
            BenchmarkType::Standard => {
                let target = self.target.ok_or(PlanError::MissingTarget)?;
                if self.datasets.is_empty() {
                    compose_standard_benchmark(target, catalog)?
                } else {
                    let timeout = standard_timeout_secs(target)?;
                    let mut plan = compose_standard_benchmark(target, catalog).unwrap_or(BenchmarkPlan {
                        benchmark,
                        target: Some(target),
                        experiments: Vec::new(),
                    });
                    for (a, names) in &self.datasets {
                        let jobs = names
                            .iter()
                            .map(|n| Ok(job_for(*a, catalog.get(n)?, STANDARD_REPETITIONS, timeout)))
                            .collect::<Result<Vec<_>, PlanError>>()?;
                        let exp = Experiment {
                            name: a.name().to_string(),
                            jobs,
                        };
                        match plan.experiments.iter_mut().find(|e| e.name == a.name()) {
                            Some(slot) => *slot = exp,
                            None => plan.experiments.push(exp),
                        }
                    }
                    plan.experiments.sort_by_key(|e| {
                        Algorithm::ALL.iter().position(|a| a.name() == e.name)
                    });
                    plan
                }
            }
        };
        for e in &mut plan.experiments {
            for j in &mut e.jobs {
                if let Some(r) = self.repetitions {
                    j.repetitions = r;
                }
                if let Some(t) = self.timeout_secs {
                    j.timeout_secs = t;
                }
            }
        }
        plan.check()?;
        Ok(plan)
    }
}
