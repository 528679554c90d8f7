//! Synthetic graphs: a seeded R-MAT sampler and the two built-in example graphs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{read_evlp, Graph, SizeClass};
use crate::harness::DatasetKind;
use crate::kernels::{Algorithm, ParameterSet};
use crate::validator::{parse_output_named, OutputVector, ValueKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("quadrant probabilities must be non-negative and sum to 1 (sum is {0})")]
    Probabilities(f64),
    #[error("edge factor must be at least 1")]
    EdgeFactor,
    #[error("scale exponent {0} is outside 1..=31")]
    ScaleExponent(u32),
    #[error("{wanted} edges requested but at most {possible} distinct edges exist")]
    TooManyEdges { wanted: u64, possible: u64 },
    #[error("sampler stalled after {attempts} draws with {accepted} of {wanted} edges")]
    Stalled {
        attempts: u64,
        accepted: u64,
        wanted: u64,
    },
    #[error("unknown example graph {0:?}")]
    UnknownExample(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmatParams {
    /// `n = 2^scale_exp`.
    pub scale_exp: u32,
    /// Target edge count is `edge_factor * n`.
    pub edge_factor: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub seed: u64,
    pub weighted: bool,
    #[serde(default)]
    pub directed: bool,
}

impl RmatParams {
    /// Graph500 quadrant probabilities (0.57, 0.19, 0.19, 0.05), undirected and unweighted.
    pub fn graph500(scale_exp: u32, edge_factor: u32, seed: u64) -> RmatParams {
        RmatParams {
            scale_exp,
            edge_factor,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            d: 0.05,
            seed,
            weighted: false,
            directed: false,
        }
    }

    pub fn check(&self) -> Result<(), GeneratorError> {
        let probs = [self.a, self.b, self.c, self.d];
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(GeneratorError::Probabilities(sum));
        }
        if self.edge_factor < 1 {
            return Err(GeneratorError::EdgeFactor);
        }
        if !(1..=31).contains(&self.scale_exp) {
            return Err(GeneratorError::ScaleExponent(self.scale_exp));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> u64 {
        1u64 << self.scale_exp
    }

    pub fn target_edges(&self) -> u64 {
        u64::from(self.edge_factor) * self.vertex_count()
    }
}

/// Samples an R-MAT graph on the vertex range `[0, 2^scale_exp)`.
///
/// Self-loops and repeated edges are discarded and redrawn, so the result
/// has exactly `edge_factor * n` edges. Output depends only on `p`.
pub fn rmat_generate(p: &RmatParams) -> Result<Graph, GeneratorError> {
    p.check()?;
    let n = p.vertex_count();
    let wanted = p.target_edges();
    let possible = if p.directed {
        n * (n - 1)
    } else {
        n * (n - 1) / 2
    };
    if wanted > possible {
        return Err(GeneratorError::TooManyEdges { wanted, possible });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (ab, abc) = (p.a + p.b, p.a + p.b + p.c);
    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(wanted as usize);
    let mut edges: Vec<(u32, u32, f64)> = Vec::with_capacity(wanted as usize);
    let max_attempts = wanted.saturating_mul(64).saturating_add(1 << 20);
    let mut attempts = 0u64;
    while (edges.len() as u64) < wanted {
        if attempts == max_attempts {
            return Err(GeneratorError::Stalled {
                attempts,
                accepted: edges.len() as u64,
                wanted,
            });
        }
        attempts += 1;
        let (mut src, mut dst) = (0u32, 0u32);
        for _ in 0..p.scale_exp {
            let r: f64 = rng.random();
            let (sb, db) = if r < p.a {
                (0, 0)
            } else if r < ab {
                (0, 1)
            } else if r < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            src = (src << 1) | sb;
            dst = (dst << 1) | db;
        }
        if src == dst {
            continue;
        }
        let key = if p.directed {
            (src, dst)
        } else {
            (src.min(dst), src.max(dst))
        };
        if !seen.insert(key) {
            continue;
        }
        // Open interval at zero: `random()` is in [0, 1).
        let w = if p.weighted {
            1.0 - rng.random::<f64>()
        } else {
            0.0
        };
        edges.push((key.0, key.1, w));
    }
    edges.sort_unstable_by_key(|&(s, d, _)| (s, d));
    let weights = p.weighted.then(|| edges.iter().map(|e| e.2).collect());
    let list = edges.into_iter().map(|(s, d, _)| (s, d)).collect();
    Ok(Graph::from_sorted_parts(p.directed, (0..n as i64).collect(), list, weights))
}

/// A small R-MAT graph that stands in for a dataset of a larger class.
#[derive(Debug, Clone, PartialEq)]
pub struct StandIn {
    pub name: String,
    pub kind: DatasetKind,
    pub params: RmatParams,
}

/// Six desk-sized graphs for a standard benchmark at `class`: one
/// unweighted Graph500-style graph and five weighted Datagen substitutes.
pub fn stand_ins(class: SizeClass) -> Vec<StandIn> {
    let seed = 1000 * (class as u64 + 1);
    let label = class.label().to_ascii_lowercase();
    let mut out = vec![StandIn {
        name: format!("{label}-graph500"),
        kind: DatasetKind::Graph500,
        params: RmatParams::graph500(13, 16, seed),
    }];
    let shapes = [(13, 16, true), (13, 12, false), (12, 32, true), (13, 8, false), (12, 16, true)];
    for (i, &(scale_exp, edge_factor, directed)) in shapes.iter().enumerate() {
        out.push(StandIn {
            name: format!("{label}-datagen-{}", i + 1),
            kind: DatasetKind::Datagen,
            params: RmatParams {
                scale_exp,
                edge_factor,
                a: 0.45,
                b: 0.22,
                c: 0.22,
                d: 0.11,
                seed: seed + 1 + i as u64,
                weighted: true,
                directed,
            },
        });
    }
    out
}

/// Source vertex for BFS and SSSP: the vertex with the most out-edges
/// (smallest id on ties), so traversals reach a large part of the graph.
pub fn busiest_vertex(g: &Graph) -> Option<i64> {
    (0..g.vertex_count())
        .max_by_key(|&v| (g.out_degree(v), std::cmp::Reverse(v)))
        .map(|v| g.vertex_id(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExampleGraphId {
    #[serde(rename = "example-directed")]
    Directed,
    #[serde(rename = "example-undirected")]
    Undirected,
}

impl ExampleGraphId {
    pub const ALL: [ExampleGraphId; 2] = [ExampleGraphId::Directed, ExampleGraphId::Undirected];

    pub fn name(self) -> &'static str {
        match self {
            ExampleGraphId::Directed => "example-directed",
            ExampleGraphId::Undirected => "example-undirected",
        }
    }

    pub fn is_directed(self) -> bool {
        self == ExampleGraphId::Directed
    }

    pub fn parameters(self) -> ParameterSet {
        let root = match self {
            ExampleGraphId::Directed => 1,
            ExampleGraphId::Undirected => 2,
        };
        ParameterSet {
            bfs_source: root,
            sssp_source: root,
            pr_damping: 0.85,
            pr_iterations: 2,
            cdlp_iterations: 2,
        }
    }
}

impl fmt::Display for ExampleGraphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleGraphId {
    type Err = GeneratorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExampleGraphId::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| GeneratorError::UnknownExample(s.to_string()))
    }
}

/// Raw fixture text of an example graph: vertex file, edge file and one
/// reference output per algorithm in [`Algorithm::ALL`] order.
pub struct ExampleFiles {
    pub vertices: &'static str,
    pub edges: &'static str,
    pub references: [(Algorithm, &'static str); 6],
}

macro_rules! example_files {
    ($name:literal) => {
        ExampleFiles {
            vertices: include_str!(concat!("../fixtures/", $name, "/", $name, ".v")),
            edges: include_str!(concat!("../fixtures/", $name, "/", $name, ".e")),
            references: [
                (Algorithm::Bfs, include_str!(concat!("../fixtures/", $name, "/", $name, "-BFS"))),
                (Algorithm::Wcc, include_str!(concat!("../fixtures/", $name, "/", $name, "-WCC"))),
                (Algorithm::Pr, include_str!(concat!("../fixtures/", $name, "/", $name, "-PR"))),
                (Algorithm::Cdlp, include_str!(concat!("../fixtures/", $name, "/", $name, "-CDLP"))),
                (Algorithm::Lcc, include_str!(concat!("../fixtures/", $name, "/", $name, "-LCC"))),
                (Algorithm::Sssp, include_str!(concat!("../fixtures/", $name, "/", $name, "-SSSP"))),
            ],
        }
    };
}

pub fn example_files(id: ExampleGraphId) -> ExampleFiles {
    match id {
        ExampleGraphId::Directed => example_files!("example-directed"),
        ExampleGraphId::Undirected => example_files!("example-undirected"),
    }
}

#[derive(Debug, Clone)]
pub struct ExampleGraph {
    pub id: ExampleGraphId,
    pub graph: Graph,
    pub parameters: ParameterSet,
    pub references: BTreeMap<Algorithm, OutputVector>,
}

pub fn example_graph(id: ExampleGraphId) -> ExampleGraph {
    let files = example_files(id);
    let graph = read_evlp(files.vertices.as_bytes(), files.edges.as_bytes(), id.is_directed(), true)
        .expect("example fixture is valid EVLP");
    let references = files
        .references
        .iter()
        .map(|&(a, text)| {
            let name = format!("{}-{}", id.name(), a);
            let v = parse_output_named(&name, text, ValueKind::of(a)).expect("example reference parses");
            (a, v)
        })
        .collect();
    ExampleGraph {
        id,
        graph,
        parameters: id.parameters(),
        references,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::write_evlp;
    use crate::kernels::run_kernel;
    use crate::validator::{validate, MatchRule};

    #[test]
    fn rmat_is_deterministic() {
        let p = RmatParams::graph500(10, 16, 42);
        let g1 = rmat_generate(&p).unwrap();
        let g2 = rmat_generate(&p).unwrap();
        assert_eq!(write_evlp(&g1), write_evlp(&g2));
        let other = rmat_generate(&RmatParams { seed: 43, ..p }).unwrap();
        assert_ne!(g1, other);
    }

    #[test]
    fn rmat_edge_count_and_invariants() {
        let p = RmatParams {
            weighted: true,
            ..RmatParams::graph500(10, 16, 42)
        };
        let g = rmat_generate(&p).unwrap();
        assert_eq!(g.vertex_count(), 1024);
        let m = g.edge_count() as f64;
        assert!((m - 16.0 * 1024.0).abs() <= 0.05 * 16.0 * 1024.0);
        let rebuilt = Graph::new(
            false,
            g.vertex_ids().to_vec(),
            g.edges().map(|(s, d, _)| (s, d)).collect(),
            Some(g.edges().map(|(_, _, w)| w.unwrap()).collect()),
        )
        .unwrap();
        assert_eq!(rebuilt, g);
        assert!(g.edges().all(|(_, _, w)| w.is_some_and(|w| w > 0.0 && w <= 1.0)));
    }

    #[test]
    fn rmat_directed() {
        let p = RmatParams {
            directed: true,
            ..RmatParams::graph500(8, 4, 7)
        };
        let g = rmat_generate(&p).unwrap();
        assert!(g.is_directed());
        assert_eq!(g.edge_count(), 1024);
    }

    #[test]
    fn rmat_is_heavy_tailed() {
        let g = rmat_generate(&RmatParams::graph500(14, 16, 1)).unwrap();
        let n = g.vertex_count();
        let max = (0..n).map(|i| g.out_degree(i)).max().unwrap() as f64;
        let mean = 2.0 * g.edge_count() as f64 / n as f64;
        assert!(max > 10.0 * mean, "max {max} mean {mean}");
    }

    #[test]
    fn rmat_rejects_bad_params() {
        let p = RmatParams::graph500(10, 16, 0);
        assert!(matches!(
            rmat_generate(&RmatParams { a: 0.6, ..p }),
            Err(GeneratorError::Probabilities(_))
        ));
        assert_eq!(rmat_generate(&RmatParams { edge_factor: 0, ..p }), Err(GeneratorError::EdgeFactor));
        assert!(matches!(
            rmat_generate(&RmatParams::graph500(2, 4, 0)),
            Err(GeneratorError::TooManyEdges { wanted: 16, possible: 6 })
        ));
    }

    #[test]
    fn stand_in_set() {
        let s = stand_ins(SizeClass::S);
        assert_eq!(s.len(), 6);
        assert_eq!(s.iter().filter(|d| d.kind == DatasetKind::Graph500).count(), 1);
        assert!(s.iter().filter(|d| d.kind == DatasetKind::Datagen).all(|d| d.params.weighted));
        assert!(s.iter().all(|d| d.params.check().is_ok() && d.params.scale_exp <= 16));
        assert_ne!(stand_ins(SizeClass::M)[0].params.seed, s[0].params.seed);
    }

    #[test]
    fn busiest() {
        let g = Graph::new(true, vec![1, 2, 3], vec![(2, 1), (2, 3), (3, 1)], None).unwrap();
        assert_eq!(busiest_vertex(&g), Some(2));
    }

    #[test]
    fn example_parameters() {
        let d = ExampleGraphId::Directed.parameters();
        assert_eq!((d.bfs_source, d.sssp_source, d.cdlp_iterations), (1, 1, 2));
        let u = ExampleGraphId::Undirected.parameters();
        assert_eq!((u.bfs_source, u.pr_damping, u.pr_iterations), (2, 0.85, 2));
        assert_eq!("example-undirected".parse::<ExampleGraphId>().unwrap(), ExampleGraphId::Undirected);
        assert!("example".parse::<ExampleGraphId>().is_err());
    }

    #[test]
    fn examples_satisfy_their_references() {
        for id in ExampleGraphId::ALL {
            let ex = example_graph(id);
            assert!(ex.graph.vertex_count() <= 10);
            assert_eq!(ex.graph.is_directed(), id.is_directed());
            for a in Algorithm::ALL {
                let out = run_kernel(&ex.graph, &ex.parameters.for_algorithm(a)).unwrap();
                let verdict = validate(&MatchRule::for_algorithm(a), &ex.references[&a], &out);
                assert!(verdict.passed, "{id} {a}: {verdict:?}");
            }
        }
    }
}
