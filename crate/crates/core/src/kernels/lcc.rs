use super::{keyed, FloatOutput};
use crate::graph::Graph;

/// Local clustering coefficient of every vertex.
///
/// The neighborhood `N(v)` ignores direction and counts each neighbor once;
/// arcs between neighbors are counted with their direction, so a
/// reciprocal pair contributes two.
pub fn lcc(g: &Graph) -> FloatOutput {
    let n = g.vertex_count();
    let mut mark = vec![usize::MAX; n];
    let mut values = vec![0.0; n];
    for v in 0..n {
        let nbrs = g.all_neighbors(v);
        let d = nbrs.len();
        if d < 2 {
            continue;
        }
        for &u in nbrs {
            mark[u as usize] = v;
        }
        let mut arcs: u64 = 0;
        for &u in nbrs {
            let u = u as usize;
            let out = g.out_neighbors(u);
            arcs += if d < out.len() {
                nbrs.iter()
                    .filter(|&&w| out.binary_search(&w).is_ok())
                    .count() as u64
            } else {
                out.iter().filter(|&&w| mark[w as usize] == v).count() as u64
            };
        }
        values[v] = arcs as f64 / (d as f64 * (d - 1) as f64);
    }
    keyed(g, &values)
}
