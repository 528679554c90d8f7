use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{keyed, source_index, FloatOutput, KernelError};
use crate::graph::{Graph, VertexId};

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance; distances are never NaN.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest path lengths from `root`; unreachable vertices get `+inf`.
pub fn sssp(g: &Graph, root: VertexId) -> Result<FloatOutput, KernelError> {
    if !g.is_weighted() {
        return Err(KernelError::Unweighted);
    }
    let root = source_index(g, root)?;
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[root] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        vertex: root,
    });
    while let Some(Entry { dist: d, vertex: v }) = heap.pop() {
        if d > dist[v] {
            continue; // stale
        }
        let weights = g.out_weights(v).expect("weighted graph");
        for (&w, &len) in g.out_neighbors(v).iter().zip(weights) {
            let w = w as usize;
            let candidate = d + len;
            if candidate < dist[w] {
                dist[w] = candidate;
                heap.push(Entry {
                    dist: candidate,
                    vertex: w,
                });
            }
        }
    }
    Ok(keyed(g, &dist))
}
