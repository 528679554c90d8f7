//! In-memory graph model, EVLP file I/O and scale arithmetic.
//!
//! A [`Graph`] is immutable once built. Vertex identifiers are arbitrary
//! signed 64-bit integers; internally every vertex is addressed by its
//! position in the ascending identifier list, and adjacency is stored as
//! compressed sparse rows keyed by that position.

mod evlp;
mod scale;

pub use evlp::{
    format_graph, read_evlp, read_evlp_files, read_evlp_named, write_evlp, write_evlp_files,
    write_evlp_to, EvlpError, EvlpRule,
};
pub use scale::{scale_of, size_class, Scale, ScaleError, SizeClass};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier as it appears in dataset files.
pub type VertexId = i64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge endpoint {0} is not in the vertex set")]
    UnknownEndpoint(VertexId),
    #[error("invalid weight {weight} on edge {src} -> {dst}")]
    InvalidWeight {
        src: VertexId,
        dst: VertexId,
        weight: f64,
    },
    #[error("{weights} weights supplied for {edges} edges")]
    WeightCount { edges: usize, weights: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("graph has more than {} vertices", u32::MAX)]
    TooLarge,
}

/// Which incident edges a neighborhood query follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
    All,
}

#[derive(Debug, Clone, Default)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Option<Vec<f64>>,
}

impl Csr {
    /// Builds rows from `(row, target, weight)` triples; rows come out sorted by target.
    fn build(n: usize, mut entries: Vec<(u32, u32, f64)>, weighted: bool) -> Csr {
        entries.sort_unstable_by_key(|&(r, t, _)| (r, t));
        let mut offsets = vec![0usize; n + 1];
        for &(r, _, _) in &entries {
            offsets[r as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = entries.iter().map(|e| e.1).collect();
        let weights = weighted.then(|| entries.iter().map(|e| e.2).collect());
        Csr {
            offsets,
            targets,
            weights,
        }
    }

    fn row(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn row_weights(&self, v: usize) -> Option<&[f64]> {
        self.weights
            .as_ref()
            .map(|w| &w[self.offsets[v]..self.offsets[v + 1]])
    }
}

/// Directed or undirected graph without self-loops or multi-edges.
///
/// Undirected edges are stored once with the smaller endpoint first; their
/// adjacency rows list both directions, so `N_in = N_out = N` holds.
#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    ids: Vec<VertexId>,
    edges: Vec<(u32, u32)>,
    weights: Option<Vec<f64>>,
    out: Csr,
    // Directed graphs only; undirected graphs reuse `out`.
    inc: Option<Csr>,
    all: Option<Csr>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.ids == other.ids
            && self.edges == other.edges
            && self.weights == other.weights
    }
}

/// Summary numbers used to place a dataset on the size scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub vertices: u64,
    pub edges: u64,
    pub scale: Scale,
    /// `None` when the scale falls outside the class table.
    pub class: Option<SizeClass>,
}

impl Graph {
    /// Builds a graph from unsorted vertex and edge lists, checking every invariant.
    ///
    /// For undirected graphs `(u, v)` and `(v, u)` denote the same edge;
    /// supplying both is reported as a duplicate.
    pub fn new(
        directed: bool,
        mut vertices: Vec<VertexId>,
        edges: Vec<(VertexId, VertexId)>,
        weights: Option<Vec<f64>>,
    ) -> Result<Graph, GraphError> {
        if vertices.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(GraphError::WeightCount {
                    edges: edges.len(),
                    weights: w.len(),
                });
            }
        }
        let index = |id: VertexId| -> Result<u32, GraphError> {
            vertices
                .binary_search(&id)
                .map(|i| i as u32)
                .map_err(|_| GraphError::UnknownEndpoint(id))
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for (k, &(src, dst)) in edges.iter().enumerate() {
            if src == dst {
                return Err(GraphError::SelfLoop(src));
            }
            let w = weights.as_ref().map_or(0.0, |w| w[k]);
            if weights.is_some() && !valid_weight(w) {
                return Err(GraphError::InvalidWeight {
                    src,
                    dst,
                    weight: w,
                });
            }
            let (s, d) = (index(src)?, index(dst)?);
            let (s, d) = if directed { (s, d) } else { (s.min(d), s.max(d)) };
            indexed.push((s, d, w));
        }
        indexed.sort_unstable_by_key(|&(s, d, _)| (s, d));
        if let Some(w) = indexed.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(GraphError::DuplicateEdge(
                vertices[w[0].0 as usize],
                vertices[w[0].1 as usize],
            ));
        }
        let weighted = weights.is_some();
        let edge_list = indexed.iter().map(|&(s, d, _)| (s, d)).collect();
        let edge_weights = weighted.then(|| indexed.iter().map(|e| e.2).collect());
        Ok(Self::from_sorted_parts(
            directed,
            vertices,
            edge_list,
            edge_weights,
        ))
    }

    /// Assembles a graph from parts already validated and sorted.
    pub(crate) fn from_sorted_parts(
        directed: bool,
        ids: Vec<VertexId>,
        edges: Vec<(u32, u32)>,
        weights: Option<Vec<f64>>,
    ) -> Graph {
        let n = ids.len();
        let weighted = weights.is_some();
        let w_at = |k: usize| weights.as_ref().map_or(0.0, |w| w[k]);
        let forward: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(k, &(s, d))| (s, d, w_at(k)))
            .collect();
        let reverse: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(k, &(s, d))| (d, s, w_at(k)))
            .collect();
        let (out, inc, all) = if directed {
            let out = Csr::build(n, forward.clone(), weighted);
            let inc = Csr::build(n, reverse.clone(), weighted);
            let mut both: Vec<_> = forward
                .into_iter()
                .chain(reverse)
                .map(|(s, d, _)| (s, d, 0.0))
                .collect();
            both.sort_unstable_by_key(|&(s, d, _)| (s, d));
            both.dedup_by_key(|e| (e.0, e.1));
            let all = Csr::build(n, both, false);
            (out, Some(inc), Some(all))
        } else {
            let mut both = forward;
            both.extend(reverse);
            (Csr::build(n, both, weighted), None, None)
        };
        Graph {
            directed,
            ids,
            edges,
            weights,
            out,
            inc,
            all,
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex identifiers in ascending order; position `i` is vertex index `i`.
    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn vertex_id(&self, index: usize) -> VertexId {
        self.ids[index]
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Edges in canonical order as `(src, dst, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Option<f64>)> + '_ {
        self.edges.iter().enumerate().map(move |(k, &(s, d))| {
            (
                self.ids[s as usize],
                self.ids[d as usize],
                self.weights.as_ref().map(|w| w[k]),
            )
        })
    }

    /// Out-neighbor indices of vertex index `v`, ascending.
    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        self.out.row(v)
    }

    /// Weights aligned with [`Graph::out_neighbors`].
    pub fn out_weights(&self, v: usize) -> Option<&[f64]> {
        self.out.row_weights(v)
    }

    /// In-neighbor indices of vertex index `v`, ascending.
    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        match &self.inc {
            Some(inc) => inc.row(v),
            None => self.out.row(v),
        }
    }

    /// `N_in ∪ N_out` of vertex index `v`, ascending and deduplicated.
    pub fn all_neighbors(&self, v: usize) -> &[u32] {
        match &self.all {
            Some(all) => all.row(v),
            None => self.out.row(v),
        }
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_neighbors(v).len()
    }

    /// True if the directed arc `u -> w` exists (either orientation when undirected).
    pub fn has_arc(&self, u: usize, w: usize) -> bool {
        self.out_neighbors(u).binary_search(&(w as u32)).is_ok()
    }

    /// Neighborhood of `v` by identifier, as an ascending set of identifiers.
    pub fn neighbors(&self, v: VertexId, mode: Direction) -> Result<Vec<VertexId>, GraphError> {
        let idx = self.index_of(v).ok_or(GraphError::UnknownVertex(v))?;
        let row = match mode {
            Direction::In => self.in_neighbors(idx),
            Direction::Out => self.out_neighbors(idx),
            Direction::All => self.all_neighbors(idx),
        };
        Ok(row.iter().map(|&u| self.ids[u as usize]).collect())
    }

    pub fn metadata(&self) -> GraphMetadata {
        let (n, m) = (self.vertex_count() as u64, self.edge_count() as u64);
        let scale = scale_of(n, m).unwrap_or(Scale::from_tenths(0));
        GraphMetadata {
            vertices: n,
            edges: m,
            scale,
            class: size_class(scale).ok(),
        }
    }

    /// Copy of this graph with edge weights dropped.
    pub fn without_weights(&self) -> Graph {
        Self::from_sorted_parts(self.directed, self.ids.clone(), self.edges.clone(), None)
    }
}

pub(crate) fn valid_weight(w: f64) -> bool {
    w.is_finite() && w >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> Graph {
        Graph::new(
            true,
            vec![58, 238, 431, 598, 893],
            vec![(58, 238), (431, 598), (598, 238), (598, 431), (598, 893)],
            Some(vec![1.4, 4.2, 1.2, 0.0, 0.1]),
        )
        .unwrap()
    }

    #[test]
    fn neighbor_queries_on_directed_example() {
        let g = fig2();
        assert_eq!(g.neighbors(598, Direction::Out).unwrap(), vec![238, 431, 893]);
        assert!(g.neighbors(58, Direction::In).unwrap().is_empty());
        assert_eq!(g.neighbors(431, Direction::All).unwrap(), vec![598]);
        assert_eq!(g.neighbors(238, Direction::In).unwrap(), vec![58, 598]);
        assert_eq!(g.neighbors(7, Direction::Out), Err(GraphError::UnknownVertex(7)));
    }

    #[test]
    fn undirected_directions_coincide() {
        let g = Graph::new(false, vec![1, 2, 3], vec![(2, 1), (2, 3)], None).unwrap();
        for v in [1, 2, 3] {
            let out = g.neighbors(v, Direction::Out).unwrap();
            assert_eq!(out, g.neighbors(v, Direction::In).unwrap());
            assert_eq!(out, g.neighbors(v, Direction::All).unwrap());
        }
        assert_eq!(g.edges().next(), Some((1, 2, None)));
    }

    #[test]
    fn rejects_invariant_violations() {
        assert_eq!(
            Graph::new(true, vec![5], vec![(5, 5)], None),
            Err(GraphError::SelfLoop(5))
        );
        assert_eq!(
            Graph::new(false, vec![1, 2], vec![(1, 2), (2, 1)], None),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert!(Graph::new(true, vec![1, 2], vec![(1, 2), (2, 1)], None).is_ok());
        assert_eq!(
            Graph::new(true, vec![1, 1], vec![], None),
            Err(GraphError::DuplicateVertex(1))
        );
        assert_eq!(
            Graph::new(true, vec![1], vec![(1, 9)], None),
            Err(GraphError::UnknownEndpoint(9))
        );
        assert!(matches!(
            Graph::new(true, vec![1, 2], vec![(1, 2)], Some(vec![-0.5])),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert!(matches!(
            Graph::new(true, vec![1, 2], vec![(1, 2)], Some(vec![f64::NAN])),
            Err(GraphError::InvalidWeight { .. })
        ));
    }

    #[test]
    fn out_degrees_sum_to_edge_count() {
        let g = fig2();
        let total: usize = (0..g.vertex_count()).map(|v| g.out_degree(v)).sum();
        assert_eq!(total, g.edge_count());
        let u = Graph::new(false, vec![1, 2, 3], vec![(1, 2), (2, 3), (1, 3)], None).unwrap();
        let total: usize = (0..u.vertex_count()).map(|v| u.out_degree(v)).sum();
        assert_eq!(total, 2 * u.edge_count());
    }
}
