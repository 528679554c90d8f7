use std::collections::VecDeque;

use super::{keyed, source_index, IntOutput, KernelError};
use crate::graph::{Graph, VertexId};

/// Depth reported for vertices the root cannot reach.
pub const UNREACHABLE_DEPTH: i64 = -1;

/// Breadth-first search over out-edges from `root`.
pub fn bfs(g: &Graph, root: VertexId) -> Result<IntOutput, KernelError> {
    let root = source_index(g, root)?;
    let mut depth = vec![UNREACHABLE_DEPTH; g.vertex_count()];
    let mut queue = VecDeque::new();
    depth[root] = 0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        let next = depth[v] + 1;
        for &u in g.out_neighbors(v) {
            let u = u as usize;
            if depth[u] == UNREACHABLE_DEPTH {
                depth[u] = next;
                queue.push_back(u);
            }
        }
    }
    Ok(keyed(g, &depth))
}
