use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use thiserror::Error;

use crate::graph::{read_evlp_files, Graph};
use crate::kernels::{run_kernel, Algorithm, KernelParams};
use crate::validator::write_output_file;

/// File in a run's log directory holding the driver-reported processing time.
pub const TIMING_LOG: &str = "timing.log";
const TIMING_KEY: &str = "processing_time_s";

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct DriverError(pub String);

impl DriverError {
    pub fn new(msg: impl Into<String>) -> DriverError {
        DriverError(msg.into())
    }
}

impl From<io::Error> for DriverError {
    fn from(e: io::Error) -> Self {
        DriverError(e.to_string())
    }
}

/// Shared flag a running job polls to learn it should stop.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn cancel(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::SeqCst)
    }
}

/// A dataset after property minimization, ready for `load_graph`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormattedGraph {
    pub name: String,
    pub vertex_file: PathBuf,
    pub edge_file: PathBuf,
    pub directed: bool,
    pub weighted: bool,
    pub vertices: u64,
    pub edges: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunContext {
    pub job: String,
    pub run: u32,
    pub algorithm: Algorithm,
    pub parameters: KernelParams,
    pub dataset: String,
    /// The driver writes the per-vertex output files here.
    pub output_dir: PathBuf,
    /// The driver writes [`TIMING_LOG`] here.
    pub log_dir: PathBuf,
}

/// Lifecycle hooks a platform implements to be benchmarked.
///
/// A loaded graph must serve every algorithm without further preprocessing.
pub trait PlatformDriver: Send + Sync {
    fn name(&self) -> &str;

    fn verify_setup(&self) -> Result<(), DriverError> {
        Ok(())
    }

    /// Platform-specific conversion of an already minimized dataset.
    fn format_graph(&self, _graph: &FormattedGraph) -> Result<(), DriverError> {
        Ok(())
    }

    fn load_graph(&self, graph: &FormattedGraph) -> Result<(), DriverError>;

    fn delete_graph(&self, dataset: &str) -> Result<(), DriverError>;

    fn prepare(&self, _ctx: &RunContext) -> Result<(), DriverError> {
        Ok(())
    }

    fn startup(&self, _ctx: &RunContext) -> Result<(), DriverError> {
        Ok(())
    }

    /// Executes the algorithm, writes its output and the timing log.
    fn run(&self, ctx: &RunContext, cancel: &CancelToken) -> Result<(), DriverError>;

    fn finalize(&self, _ctx: &RunContext) -> Result<(), DriverError> {
        Ok(())
    }

    /// Called when a run overruns its deadline.
    fn terminate(&self, _ctx: &RunContext) {}
}

pub fn write_timing_log(log_dir: &Path, processing_secs: f64) -> io::Result<()> {
    fs::create_dir_all(log_dir)?;
    fs::write(
        log_dir.join(TIMING_LOG),
        format!("{TIMING_KEY}={processing_secs:?}\n"),
    )
}

pub fn read_timing_log(log_dir: &Path) -> Result<f64, String> {
    let path = log_dir.join(TIMING_LOG);
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value = text
        .lines()
        .find_map(|l| l.strip_prefix(TIMING_KEY)?.strip_prefix('='))
        .ok_or_else(|| format!("{}: no {TIMING_KEY} entry", path.display()))?;
    let t: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("{}: bad processing time {value:?}", path.display()))?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(format!("{}: bad processing time {value:?}", path.display()));
    }
    Ok(t)
}

/// Runs the built-in kernels in process.
///
/// Load time covers building the in-memory graph. Processing time covers the
/// kernel alone; writing the output counts toward the makespan only.
#[derive(Default)]
pub struct ReferenceDriver {
    graphs: Mutex<HashMap<String, Arc<Graph>>>,
}

impl ReferenceDriver {
    pub fn new() -> ReferenceDriver {
        ReferenceDriver::default()
    }

    pub fn loaded(&self) -> Vec<String> {
        let mut names: Vec<String> = self.graphs.lock().unwrap().keys().cloned().collect();
        names.sort();
        names
    }

    fn graph(&self, name: &str) -> Result<Arc<Graph>, DriverError> {
        self.graphs
            .lock()
            .unwrap()
            .get(name)
            .cloned()
            .ok_or_else(|| DriverError::new(format!("graph {name:?} is not loaded")))
    }
}

impl PlatformDriver for ReferenceDriver {
    fn name(&self) -> &str {
        "reference"
    }

    fn load_graph(&self, graph: &FormattedGraph) -> Result<(), DriverError> {
        let g = read_evlp_files(&graph.vertex_file, &graph.edge_file, graph.directed, graph.weighted)
            .map_err(|e| DriverError::new(e.to_string()))?;
        self.graphs
            .lock()
            .unwrap()
            .insert(graph.name.clone(), Arc::new(g));
        Ok(())
    }

    fn delete_graph(&self, dataset: &str) -> Result<(), DriverError> {
        self.graphs
            .lock()
            .unwrap()
            .remove(dataset)
            .map(|_| ())
            .ok_or_else(|| DriverError::new(format!("graph {dataset:?} is not loaded")))
    }

    fn run(&self, ctx: &RunContext, cancel: &CancelToken) -> Result<(), DriverError> {
        let g = self.graph(&ctx.dataset)?;
        let start = Instant::now();
        let out = run_kernel(&g, &ctx.parameters).map_err(|e| DriverError::new(e.to_string()))?;
        let processing = start.elapsed().as_secs_f64();
        if cancel.is_cancelled() {
            return Err(DriverError::new("cancelled"));
        }
        fs::create_dir_all(&ctx.output_dir)?;
        write_output_file(&out, &ctx.output_dir.join("output.txt"))?;
        write_timing_log(&ctx.log_dir, processing)?;
        Ok(())
    }
}
