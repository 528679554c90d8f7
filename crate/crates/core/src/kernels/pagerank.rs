use serde::{Deserialize, Serialize};

use super::{keyed, FloatOutput, KernelError};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    /// Damping factor `d`, in `[0, 1]`.
    pub damping: f64,
    /// Number of synchronous update rounds.
    pub iterations: u32,
}

impl PageRankParams {
    fn check(&self) -> Result<(), KernelError> {
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(KernelError::InvalidParameter(format!(
                "damping factor {} outside [0, 1]",
                self.damping
            )));
        }
        if self.iterations == 0 {
            return Err(KernelError::InvalidParameter(
                "PageRank needs at least one iteration".into(),
            ));
        }
        Ok(())
    }
}

/// PageRank after exactly `p.iterations` rounds.
pub fn pagerank(g: &Graph, p: &PageRankParams) -> Result<FloatOutput, KernelError> {
    p.check()?;
    let mut ranks = initial(g);
    let mut next = vec![0.0; ranks.len()];
    for _ in 0..p.iterations {
        step(g, p.damping, &ranks, &mut next);
        std::mem::swap(&mut ranks, &mut next);
    }
    Ok(keyed(g, &ranks))
}

/// Rank vectors `PR_0 ..= PR_k`, one per round including the initial one.
pub fn pagerank_history(g: &Graph, p: &PageRankParams) -> Result<Vec<FloatOutput>, KernelError> {
    p.check()?;
    let mut ranks = initial(g);
    let mut history = vec![keyed(g, &ranks)];
    let mut next = vec![0.0; ranks.len()];
    for _ in 0..p.iterations {
        step(g, p.damping, &ranks, &mut next);
        std::mem::swap(&mut ranks, &mut next);
        history.push(keyed(g, &ranks));
    }
    Ok(history)
}

fn initial(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    vec![1.0 / n as f64; n]
}

// Vertices with no out-edges are dangling: their rank is spread evenly over
// all vertices. Sums run in ascending vertex order so results are
// reproducible bit for bit.
fn step(g: &Graph, damping: f64, ranks: &[f64], next: &mut [f64]) {
    let n = ranks.len() as f64;
    let mut dangling_sum = 0.0;
    let contrib: Vec<f64> = ranks
        .iter()
        .enumerate()
        .map(|(v, &r)| match g.out_degree(v) {
            0 => {
                dangling_sum += r;
                0.0
            }
            deg => r / deg as f64,
        })
        .collect();
    let teleport = (1.0 - damping) / n;
    let redistributed = damping / n * dangling_sum;
    for (v, slot) in next.iter_mut().enumerate() {
        let importance: f64 = g.in_neighbors(v).iter().map(|&u| contrib[u as usize]).sum();
        *slot = teleport + damping * importance + redistributed;
    }
}
