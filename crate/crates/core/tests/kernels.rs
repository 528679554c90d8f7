mod common;

use std::collections::BTreeMap;
use std::path::Path;

use common::{oracles, random, RawGraph};
use graphalytics::generator::{example_files, example_graph, ExampleGraphId};
use graphalytics::graph::read_evlp;
use graphalytics::kernels::{
    bfs, cdlp, cdlp_round, lcc, pagerank, pagerank_history, sssp, wcc, Algorithm, CdlpParams,
    PageRankParams,
};
use graphalytics::validator::{write_output, OutputVector};

fn assert_close(kernel: &BTreeMap<i64, f64>, oracle: &BTreeMap<i64, f64>, tol: f64, what: &str) {
    assert_eq!(kernel.len(), oracle.len(), "{what}: vertex count");
    for (v, &o) in oracle {
        let k = kernel[v];
        let ok = k == o || (k - o).abs() <= tol * o.abs().max(1e-300);
        assert!(ok, "{what}: vertex {v} kernel {k} oracle {o}");
    }
}

#[test]
fn kernels_match_oracles_on_random_graphs() {
    let mut rng = random::rng(0x5eed);
    for round in 0..120 {
        let raw = random::graph(&mut rng);
        let g = raw.to_graph();
        let root = random::pick_vertex(&mut rng, &raw);
        let tag = format!("graph {round} (directed={})", raw.directed);

        assert_eq!(bfs(&g, root).unwrap(), oracles::bfs(&raw, root), "{tag} bfs");
        assert_eq!(wcc(&g), oracles::wcc(&raw), "{tag} wcc");
        assert_eq!(
            cdlp(&g, &CdlpParams { max_iterations: 3 }).unwrap(),
            oracles::cdlp(&raw, 3),
            "{tag} cdlp"
        );
        let p = PageRankParams {
            damping: 0.85,
            iterations: 3,
        };
        assert_close(&pagerank(&g, &p).unwrap(), &oracles::pagerank(&raw, 0.85, 3), 1e-12, &format!("{tag} pr"));
        assert_close(&lcc(&g), &oracles::lcc(&raw), 1e-12, &format!("{tag} lcc"));
        assert_close(&sssp(&g, root).unwrap(), &oracles::sssp(&raw, root), 1e-12, &format!("{tag} sssp"));
    }
}

#[test]
fn one_cdlp_round_matches_histogram_oracle_from_arbitrary_labels() {
    use rand::Rng;
    let mut rng = random::rng(77);
    for _ in 0..50 {
        let raw = random::graph(&mut rng);
        let g = raw.to_graph();
        let labels: Vec<i64> = raw.vertices.iter().map(|_| rng.random_range(0..4)).collect();
        let map: BTreeMap<i64, i64> = raw.vertices.iter().copied().zip(labels.iter().copied()).collect();
        let ours: BTreeMap<i64, i64> = raw.vertices.iter().copied().zip(cdlp_round(&g, &labels)).collect();
        assert_eq!(ours, oracles::cdlp_round(&raw, &map));
    }
}

#[test]
fn pagerank_history_matches_dense_oracle_with_many_dangling_vertices() {
    let mut rng = random::rng(9);
    for _ in 0..30 {
        let raw = random::dangling_graph(&mut rng, 20, 0.35);
        let g = raw.to_graph();
        let p = PageRankParams {
            damping: 0.85,
            iterations: 5,
        };
        let ours = pagerank_history(&g, &p).unwrap();
        let dense = oracles::pagerank_history(&raw, 0.85, 5);
        for (i, (a, b)) in ours.iter().zip(&dense).enumerate() {
            let b: BTreeMap<i64, f64> = raw.vertices.iter().copied().zip(b.iter().copied()).collect();
            assert_close(a, &b, 1e-12, &format!("round {i}"));
            let total: f64 = a.values().sum();
            assert!((total - 1.0).abs() < 1e-12, "round {i} sums to {total}");
        }
    }
}

#[test]
fn lcc_in_and_out_formulations_agree() {
    let mut rng = random::rng(31);
    for _ in 0..30 {
        let raw = random::graph(&mut rng);
        let reversed = RawGraph {
            edges: raw.edges.iter().map(|&(s, t, w)| if raw.directed { (t, s, w) } else { (s, t, w) }).collect(),
            ..raw.clone()
        };
        let reversed = RawGraph {
            edges: {
                let mut e = reversed.edges;
                e.sort_by_key(|&(s, t, _)| (s, t));
                e
            },
            ..reversed
        };
        assert_close(&lcc(&raw.to_graph()), &lcc(&reversed.to_graph()), 1e-12, "reversed");
    }
}

fn oracle_outputs(id: ExampleGraphId) -> Vec<(Algorithm, String)> {
    let files = example_files(id);
    let g = read_evlp(files.vertices.as_bytes(), files.edges.as_bytes(), id.is_directed(), true).unwrap();
    let raw = RawGraph::from_graph(&g);
    let p = id.parameters();
    Algorithm::ALL
        .into_iter()
        .map(|a| {
            let v = match a {
                Algorithm::Bfs => OutputVector::Int(oracles::bfs(&raw, p.bfs_source)),
                Algorithm::Wcc => OutputVector::Int(oracles::wcc(&raw)),
                Algorithm::Pr => OutputVector::Float(oracles::pagerank(&raw, p.pr_damping, p.pr_iterations)),
                Algorithm::Cdlp => OutputVector::Int(oracles::cdlp(&raw, p.cdlp_iterations)),
                Algorithm::Lcc => OutputVector::Float(oracles::lcc(&raw)),
                Algorithm::Sssp => OutputVector::Float(oracles::sssp(&raw, p.sssp_source)),
            };
            (a, write_output(&v))
        })
        .collect()
}

#[test]
fn example_fixtures_equal_oracle_recomputation() {
    for id in ExampleGraphId::ALL {
        let files = example_files(id);
        for ((a, fixture), (b, oracle)) in files.references.iter().zip(oracle_outputs(id)) {
            assert_eq!(*a, b);
            assert_eq!(*fixture, oracle, "{id} {a}");
        }
        let ex = example_graph(id);
        assert_eq!(ex.references.len(), 6);
    }
}

/// Rewrites the example reference outputs from the oracles.
#[test]
#[ignore]
fn regenerate_example_fixtures() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for id in ExampleGraphId::ALL {
        for (a, text) in oracle_outputs(id) {
            let path = root.join(id.name()).join(format!("{}-{}", id.name(), a));
            std::fs::write(path, text).unwrap();
        }
    }
}
