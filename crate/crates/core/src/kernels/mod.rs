//! Reference implementations of the six benchmark kernels.
//!
//! Every kernel is a pure function of the graph and its parameters and
//! returns one value per vertex, keyed by vertex identifier.

mod bfs;
mod cdlp;
mod lcc;
mod pagerank;
mod sssp;
mod wcc;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::validator::OutputVector;

pub use bfs::{bfs, UNREACHABLE_DEPTH};
pub use cdlp::{cdlp, cdlp_round, CdlpParams};
pub use lcc::lcc;
pub use pagerank::{pagerank, pagerank_history, PageRankParams};
pub use sssp::sssp;
pub use wcc::wcc;

pub type IntOutput = BTreeMap<VertexId, i64>;
pub type FloatOutput = BTreeMap<VertexId, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("shortest paths need a weighted graph")]
    Unweighted,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parameters for {given} passed to {expected}")]
    ParameterMismatch {
        expected: Algorithm,
        given: Algorithm,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bfs,
    Wcc,
    Pr,
    Cdlp,
    Lcc,
    Sssp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Bfs,
        Algorithm::Wcc,
        Algorithm::Pr,
        Algorithm::Cdlp,
        Algorithm::Lcc,
        Algorithm::Sssp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bfs => "bfs",
            Algorithm::Wcc => "wcc",
            Algorithm::Pr => "pr",
            Algorithm::Cdlp => "cdlp",
            Algorithm::Lcc => "lcc",
            Algorithm::Sssp => "sssp",
        }
    }

    /// Whether the kernel produces integer values (BFS, WCC, CDLP).
    pub fn integer_output(self) -> bool {
        matches!(self, Algorithm::Bfs | Algorithm::Wcc | Algorithm::Cdlp)
    }

    pub fn needs_weights(self) -> bool {
        self == Algorithm::Sssp
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_ascii_uppercase())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower || (lower == "pagerank" && *a == Algorithm::Pr))
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Algorithm together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum KernelParams {
    Bfs { source: VertexId },
    Wcc,
    Pr(PageRankParams),
    Cdlp(CdlpParams),
    Lcc,
    Sssp { source: VertexId },
}

impl KernelParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            KernelParams::Bfs { .. } => Algorithm::Bfs,
            KernelParams::Wcc => Algorithm::Wcc,
            KernelParams::Pr(_) => Algorithm::Pr,
            KernelParams::Cdlp(_) => Algorithm::Cdlp,
            KernelParams::Lcc => Algorithm::Lcc,
            KernelParams::Sssp { .. } => Algorithm::Sssp,
        }
    }
}

/// Per-dataset kernel parameters. Reference outputs are only valid for the
/// parameters they were computed with, so these travel with the dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub bfs_source: VertexId,
    pub sssp_source: VertexId,
    #[serde(default = "default_damping")]
    pub pr_damping: f64,
    #[serde(default = "default_iterations")]
    pub pr_iterations: u32,
    #[serde(default = "default_iterations")]
    pub cdlp_iterations: u32,
}

fn default_damping() -> f64 {
    0.85
}

fn default_iterations() -> u32 {
    10
}

impl ParameterSet {
    pub fn with_source(source: VertexId) -> ParameterSet {
        ParameterSet {
            bfs_source: source,
            sssp_source: source,
            pr_damping: default_damping(),
            pr_iterations: default_iterations(),
            cdlp_iterations: default_iterations(),
        }
    }

    pub fn for_algorithm(&self, a: Algorithm) -> KernelParams {
        match a {
            Algorithm::Bfs => KernelParams::Bfs {
                source: self.bfs_source,
            },
            Algorithm::Wcc => KernelParams::Wcc,
            Algorithm::Pr => KernelParams::Pr(PageRankParams {
                damping: self.pr_damping,
                iterations: self.pr_iterations,
            }),
            Algorithm::Cdlp => KernelParams::Cdlp(CdlpParams {
                max_iterations: self.cdlp_iterations,
            }),
            Algorithm::Lcc => KernelParams::Lcc,
            Algorithm::Sssp => KernelParams::Sssp {
                source: self.sssp_source,
            },
        }
    }
}

/// Runs the kernel selected by `params`.
pub fn run_kernel(g: &Graph, params: &KernelParams) -> Result<OutputVector, KernelError> {
    Ok(match *params {
        KernelParams::Bfs { source } => OutputVector::Int(bfs(g, source)?),
        KernelParams::Wcc => OutputVector::Int(wcc(g)),
        KernelParams::Pr(p) => OutputVector::Float(pagerank(g, &p)?),
        KernelParams::Cdlp(p) => OutputVector::Int(cdlp(g, &p)?),
        KernelParams::Lcc => OutputVector::Float(lcc(g)),
        KernelParams::Sssp { source } => OutputVector::Float(sssp(g, source)?),
    })
}

fn keyed<T: Copy>(g: &Graph, values: &[T]) -> BTreeMap<VertexId, T> {
    g.vertex_ids().iter().copied().zip(values.iter().copied()).collect()
}

fn source_index(g: &Graph, source: VertexId) -> Result<usize, KernelError> {
    g.index_of(source).ok_or(KernelError::UnknownVertex(source))
}
