use std::collections::VecDeque;

use super::{keyed, IntOutput};
use crate::graph::Graph;

/// Weakly connected components, each labeled with its smallest vertex id.
///
/// Vertices are visited in ascending id order, so the first vertex reached in
/// a component is its minimum; this is the fixpoint of min-label
/// propagation over edges taken in both directions.
pub fn wcc(g: &Graph) -> IntOutput {
    const UNSET: i64 = i64::MIN;
    let mut comp = vec![UNSET; g.vertex_count()];
    let mut queue = VecDeque::new();
    for start in 0..g.vertex_count() {
        if comp[start] != UNSET {
            continue;
        }
        let label = g.vertex_id(start);
        comp[start] = label;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &u in g.all_neighbors(v) {
                let u = u as usize;
                if comp[u] == UNSET {
                    comp[u] = label;
                    queue.push_back(u);
                }
            }
        }
    }
    keyed(g, &comp)
}
