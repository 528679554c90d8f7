//! Drivers that wrap the reference driver and break one lifecycle step.

use std::fs;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use graphalytics::harness::{
    CancelToken, DriverError, FormattedGraph, PlatformDriver, ReferenceDriver, RunContext, TIMING_LOG,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    Healthy,
    /// `load_graph` fails.
    Load,
    /// `prepare` fails.
    Prepare,
    /// `startup` fails.
    Startup,
    /// `run` panics.
    Crash,
    /// `run` blocks until cancelled or this long has passed.
    Hang(Duration),
    /// Output is missing.
    NoOutput,
    /// Output lacks its last vertex.
    Truncated,
    /// One BFS depth is off by one.
    WrongValue,
    /// No timing log.
    NoTiming,
    /// Timing log claims more time than the makespan could hold.
    BogusTiming,
    /// `finalize` fails.
    Finalize,
}

pub struct FaultyDriver {
    inner: ReferenceDriver,
    fault: Fault,
    /// Only runs of this job id (or loads of this dataset) are affected; all when `None`.
    target: Option<String>,
    pub loads: AtomicUsize,
    pub deletes: AtomicUsize,
    pub runs: AtomicUsize,
}

impl FaultyDriver {
    pub fn new(fault: Fault, target: Option<&str>) -> FaultyDriver {
        FaultyDriver {
            inner: ReferenceDriver::new(),
            fault,
            target: target.map(str::to_string),
            loads: AtomicUsize::new(0),
            deletes: AtomicUsize::new(0),
            runs: AtomicUsize::new(0),
        }
    }

    fn hits(&self, fault: Fault, name: &str) -> bool {
        self.fault == fault && self.target.as_deref().is_none_or(|t| t == name)
    }

    fn output_file(ctx: &RunContext) -> std::path::PathBuf {
        ctx.output_dir.join("output.txt")
    }
}

impl PlatformDriver for FaultyDriver {
    fn name(&self) -> &str {
        "faulty"
    }

    fn load_graph(&self, graph: &FormattedGraph) -> Result<(), DriverError> {
        self.loads.fetch_add(1, Ordering::SeqCst);
        if self.hits(Fault::Load, &graph.name) {
            return Err(DriverError::new("injected load failure"));
        }
        self.inner.load_graph(graph)
    }

    fn delete_graph(&self, dataset: &str) -> Result<(), DriverError> {
        self.deletes.fetch_add(1, Ordering::SeqCst);
        self.inner.delete_graph(dataset).or(Ok(()))
    }

    fn prepare(&self, ctx: &RunContext) -> Result<(), DriverError> {
        if self.hits(Fault::Prepare, &ctx.job) {
            return Err(DriverError::new("injected prepare failure"));
        }
        Ok(())
    }

    fn startup(&self, ctx: &RunContext) -> Result<(), DriverError> {
        if self.hits(Fault::Startup, &ctx.job) {
            return Err(DriverError::new("injected startup failure"));
        }
        Ok(())
    }

    fn run(&self, ctx: &RunContext, cancel: &CancelToken) -> Result<(), DriverError> {
        self.runs.fetch_add(1, Ordering::SeqCst);
        if let Fault::Hang(limit) = self.fault {
            if self.hits(self.fault, &ctx.job) {
                let start = Instant::now();
                while !cancel.is_cancelled() && start.elapsed() < limit {
                    thread::sleep(Duration::from_millis(5));
                }
                return Err(DriverError::new("gave up"));
            }
        }
        if self.hits(Fault::Crash, &ctx.job) {
            // Unwinds without the panic hook, so nothing is printed.
            std::panic::resume_unwind(Box::new(format!("injected crash in {}", ctx.job)));
        }
        self.inner.run(ctx, cancel)?;
        let out = Self::output_file(ctx);
        if self.hits(Fault::NoOutput, &ctx.job) {
            fs::remove_file(&out)?;
        }
        if self.hits(Fault::Truncated, &ctx.job) {
            let text = fs::read_to_string(&out)?;
            let mut lines: Vec<&str> = text.lines().collect();
            lines.pop();
            fs::write(&out, lines.join("\n") + "\n")?;
        }
        if self.hits(Fault::WrongValue, &ctx.job) {
            let text = fs::read_to_string(&out)?;
            let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
            let (v, d) = lines[0].split_once(' ').expect("two columns");
            let d: i64 = d.parse().expect("integer output");
            lines[0] = format!("{v} {}", d + 1);
            fs::write(&out, lines.join("\n") + "\n")?;
        }
        if self.hits(Fault::NoTiming, &ctx.job) {
            fs::remove_file(ctx.log_dir.join(TIMING_LOG))?;
        }
        if self.hits(Fault::BogusTiming, &ctx.job) {
            graphalytics::harness::write_timing_log(&ctx.log_dir, 3600.0)?;
        }
        Ok(())
    }

    fn finalize(&self, ctx: &RunContext) -> Result<(), DriverError> {
        if self.hits(Fault::Finalize, &ctx.job) {
            return Err(DriverError::new("injected finalize failure"));
        }
        Ok(())
    }
}
