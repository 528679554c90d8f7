#![allow(dead_code)]

pub mod faults;
pub mod oracles;
pub mod random;
pub mod roundtrip;
pub mod tables;

use graphalytics::graph::Graph;

/// Plain edge-list form shared by the oracles and the random generator.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub directed: bool,
    pub vertices: Vec<i64>,
    pub edges: Vec<(i64, i64, f64)>,
}

impl RawGraph {
    pub fn from_graph(g: &Graph) -> RawGraph {
        RawGraph {
            directed: g.is_directed(),
            vertices: g.vertex_ids().to_vec(),
            edges: g
                .edges()
                .map(|(s, d, w)| (s, d, w.unwrap_or(1.0)))
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::new(
            self.directed,
            self.vertices.clone(),
            self.edges.iter().map(|&(s, d, _)| (s, d)).collect(),
            Some(self.edges.iter().map(|e| e.2).collect()),
        )
        .expect("raw graph is valid")
    }

    /// Every arc, with undirected edges listed in both directions.
    pub fn arcs(&self) -> Vec<(i64, i64, f64)> {
        let mut arcs = self.edges.clone();
        if !self.directed {
            arcs.extend(self.edges.iter().map(|&(s, d, w)| (d, s, w)));
        }
        arcs
    }

    pub fn position(&self, id: i64) -> usize {
        self.vertices.iter().position(|&v| v == id).expect("known vertex")
    }
}
