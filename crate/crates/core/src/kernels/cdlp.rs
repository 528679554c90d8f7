use serde::{Deserialize, Serialize};

use super::{keyed, IntOutput, KernelError};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdlpParams {
    pub max_iterations: u32,
}

/// Deterministic label propagation for exactly `p.max_iterations` rounds.
pub fn cdlp(g: &Graph, p: &CdlpParams) -> Result<IntOutput, KernelError> {
    if p.max_iterations == 0 {
        return Err(KernelError::InvalidParameter(
            "CDLP needs at least one iteration".into(),
        ));
    }
    let mut labels: Vec<i64> = g.vertex_ids().to_vec();
    let mut next = labels.clone();
    let mut scratch = Vec::new();
    for _ in 0..p.max_iterations {
        for (v, slot) in next.iter_mut().enumerate() {
            *slot = new_label(g, v, &labels, &mut scratch);
        }
        std::mem::swap(&mut labels, &mut next);
    }
    Ok(keyed(g, &labels))
}

/// One synchronous round starting from `labels` (indexed by vertex position).
pub fn cdlp_round(g: &Graph, labels: &[i64]) -> Vec<i64> {
    let mut scratch = Vec::new();
    (0..g.vertex_count())
        .map(|v| new_label(g, v, labels, &mut scratch))
        .collect()
}

// Labels are counted over in-neighbors and out-neighbors separately, so a
// neighbor joined by arcs in both directions votes twice. Ties go to the
// smallest label.
fn new_label(g: &Graph, v: usize, labels: &[i64], scratch: &mut Vec<i64>) -> i64 {
    scratch.clear();
    scratch.extend(g.in_neighbors(v).iter().map(|&u| labels[u as usize]));
    scratch.extend(g.out_neighbors(v).iter().map(|&u| labels[u as usize]));
    if scratch.is_empty() {
        return labels[v];
    }
    scratch.sort_unstable();
    let (mut best, mut best_count) = (scratch[0], 0usize);
    let mut i = 0;
    while i < scratch.len() {
        let label = scratch[i];
        let run = scratch[i..].iter().take_while(|&&l| l == label).count();
        if run > best_count {
            best = label;
            best_count = run;
        }
        i += run;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::test_graphs::triangle;

    #[test]
    fn triangle_two_rounds() {
        let g = triangle();
        let one = cdlp(&g, &CdlpParams { max_iterations: 1 }).unwrap();
        assert_eq!(one.into_values().collect::<Vec<_>>(), vec![2, 1, 1]);
        let two = cdlp(&g, &CdlpParams { max_iterations: 2 }).unwrap();
        assert_eq!(two.into_values().collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn isolated_vertex_keeps_label() {
        let g = Graph::new(true, vec![9], vec![], None).unwrap();
        assert_eq!(cdlp(&g, &CdlpParams { max_iterations: 4 }).unwrap()[&9], 9);
    }

    #[test]
    fn reciprocal_neighbor_counts_twice() {
        let g = Graph::new(true, vec![1, 2, 3], vec![(1, 2), (2, 1), (1, 3)], None).unwrap();
        let out = cdlp(&g, &CdlpParams { max_iterations: 1 }).unwrap();
        assert_eq!(out[&1], 2);
    }

    #[test]
    fn zero_iterations_rejected() {
        assert!(cdlp(&triangle(), &CdlpParams { max_iterations: 0 }).is_err());
    }
}
