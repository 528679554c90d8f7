//! Benchmark composition and execution.

mod catalog;
mod driver;
mod plan;
mod runner;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use catalog::{materialize_examples, write_dataset, Catalog, CatalogError, DatasetEntry, DatasetKind, CATALOG_ENV};
pub use driver::{
    read_timing_log, write_timing_log, CancelToken, DriverError, FormattedGraph, PlatformDriver,
    ReferenceDriver, RunContext, TIMING_LOG,
};
pub use plan::{
    compose_standard_benchmark, compose_test_benchmark, select_datasets, standard_timeout_secs,
    BenchmarkJob, BenchmarkPlan, BenchmarkType, Experiment, PlanError, PlanSpec, STANDARD_DATASETS,
    STANDARD_REPETITIONS, TEST_TIMEOUT_SECS,
};
pub use runner::{execute_benchmark, job_means, Harness, HarnessConfig, HarnessError, LoadedDataset, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FailureCode {
    /// Dataset could not be formatted or loaded.
    #[serde(rename = "DAT")]
    Data,
    /// Platform setup or job initialization failed.
    #[serde(rename = "INI")]
    Initialization,
    /// The algorithm crashed.
    #[serde(rename = "EXE")]
    Execution,
    /// The run hit its deadline.
    #[serde(rename = "TIM")]
    Timeout,
    /// Output missing or incomplete.
    #[serde(rename = "COM")]
    Completion,
    /// Output did not match the reference.
    #[serde(rename = "VAL")]
    Validation,
    /// Performance metrics missing or inconsistent.
    #[serde(rename = "MET")]
    Metrics,
}

impl FailureCode {
    pub const ALL: [FailureCode; 7] = [
        FailureCode::Data,
        FailureCode::Initialization,
        FailureCode::Execution,
        FailureCode::Timeout,
        FailureCode::Completion,
        FailureCode::Validation,
        FailureCode::Metrics,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FailureCode::Data => "DAT",
            FailureCode::Initialization => "INI",
            FailureCode::Execution => "EXE",
            FailureCode::Timeout => "TIM",
            FailureCode::Completion => "COM",
            FailureCode::Validation => "VAL",
            FailureCode::Metrics => "MET",
        }
    }
}

impl fmt::Display for FailureCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FailureCode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FailureCode::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown failure code {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LifecycleStep {
    VerifySetup,
    FormatGraph,
    LoadGraph,
    Prepare,
    Startup,
    Run,
    Validate,
    Finalize,
    Terminate,
    Archive,
    DeleteGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureCause {
    Error,
    Panic,
    DeadlineExceeded,
    MissingOutput,
    PartialOutput,
    Mismatch,
    MissingMetrics,
}

/// Maps a failure at a lifecycle step to its failure code.
pub fn classify_failure(step: LifecycleStep, cause: FailureCause) -> FailureCode {
    use LifecycleStep::*;
    if cause == FailureCause::DeadlineExceeded {
        return FailureCode::Timeout;
    }
    match step {
        FormatGraph | LoadGraph | DeleteGraph => FailureCode::Data,
        VerifySetup | Prepare | Startup => FailureCode::Initialization,
        Run => FailureCode::Execution,
        Terminate => FailureCode::Timeout,
        Validate => match cause {
            FailureCause::Mismatch => FailureCode::Validation,
            _ => FailureCode::Completion,
        },
        Finalize | Archive => FailureCode::Metrics,
    }
}
