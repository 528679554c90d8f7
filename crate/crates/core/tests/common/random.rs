use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RawGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph with `n` vertices on scattered (possibly negative) ids.
///
/// Edge density varies per graph; some weights are zero.
pub fn graph_with(rng: &mut ChaCha8Rng, n: usize, directed: bool) -> RawGraph {
    let mut ids = BTreeSet::new();
    while ids.len() < n {
        ids.insert(rng.random_range(-500i64..5000));
    }
    let vertices: Vec<i64> = ids.into_iter().collect();
    let density = rng.random_range(0.02..0.4);
    let mut edges = Vec::new();
    for &s in &vertices {
        for &t in &vertices {
            if s == t || (!directed && s > t) {
                continue;
            }
            if rng.random_bool(density) {
                let w = if rng.random_bool(0.1) {
                    0.0
                } else {
                    f64::from(rng.random_range(1u32..1000)) / 100.0
                };
                edges.push((s, t, w));
            }
        }
    }
    RawGraph {
        directed,
        vertices,
        edges,
    }
}

pub fn graph(rng: &mut ChaCha8Rng) -> RawGraph {
    let n = rng.random_range(5..=50);
    let directed = rng.random_bool(0.5);
    graph_with(rng, n, directed)
}

/// A digraph where a chosen share of the vertices has no out-edges.
pub fn dangling_graph(rng: &mut ChaCha8Rng, n: usize, dangling_share: f64) -> RawGraph {
    let mut g = graph_with(rng, n, true);
    let mut order = g.vertices.clone();
    order.shuffle(rng);
    let sinks: BTreeSet<i64> = order
        .into_iter()
        .take((n as f64 * dangling_share).ceil() as usize)
        .collect();
    g.edges.retain(|(s, _, _)| !sinks.contains(s));
    g
}

pub fn pick_vertex(rng: &mut ChaCha8Rng, g: &RawGraph) -> i64 {
    g.vertices[rng.random_range(0..g.vertices.len())]
}
