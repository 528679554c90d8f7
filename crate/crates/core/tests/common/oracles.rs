//! Brute-force formulations of the six kernels, written independently of
//! the library code: dense matrices, union-find, edge-list scans.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::RawGraph;

/// Hop counts from Floyd-Warshall over unit weights.
pub fn bfs(g: &RawGraph, root: i64) -> BTreeMap<i64, i64> {
    let n = g.vertices.len();
    const INF: u64 = u64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (s, t, _) in g.arcs() {
        d[g.position(s)][g.position(t)] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let r = g.position(root);
    g.vertices
        .iter()
        .enumerate()
        .map(|(j, &v)| (v, if d[r][j] >= INF { -1 } else { d[r][j] as i64 }))
        .collect()
}

/// Union-find over the edge list; each component is labelled by its smallest id.
pub fn wcc(g: &RawGraph) -> BTreeMap<i64, i64> {
    let n = g.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let next = p[x];
            p[x] = r;
            x = next;
        }
        r
    }
    for &(s, t, _) in &g.edges {
        let (a, b) = (find(&mut parent, g.position(s)), find(&mut parent, g.position(t)));
        parent[a.max(b)] = a.min(b);
    }
    // Vertices are sorted, so the smallest index of a set is its smallest id.
    let mut smallest: HashMap<usize, i64> = HashMap::new();
    for (i, &v) in g.vertices.iter().enumerate() {
        let root = find(&mut parent, i);
        smallest.entry(root).or_insert(v);
    }
    g.vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, smallest[&find(&mut parent, i)]))
        .collect()
}

/// One rank vector per round, from a dense transition matrix.
pub fn pagerank_history(g: &RawGraph, d: f64, iterations: u32) -> Vec<Vec<f64>> {
    let n = g.vertices.len();
    let nf = n as f64;
    let mut out_deg = vec![0usize; n];
    for (s, _, _) in g.arcs() {
        out_deg[g.position(s)] += 1;
    }
    let mut m = vec![vec![0.0f64; n]; n];
    for (s, t, _) in g.arcs() {
        let (i, j) = (g.position(s), g.position(t));
        m[j][i] = 1.0 / out_deg[i] as f64;
    }
    let mut pr = vec![1.0 / nf; n];
    let mut history = vec![pr.clone()];
    for _ in 0..iterations {
        let dangling: f64 = (0..n).filter(|&i| out_deg[i] == 0).map(|i| pr[i]).sum();
        let next: Vec<f64> = (0..n)
            .map(|j| {
                let incoming: f64 = (0..n).map(|i| m[j][i] * pr[i]).sum();
                (1.0 - d) / nf + d * incoming + d / nf * dangling
            })
            .collect();
        pr = next;
        history.push(pr.clone());
    }
    history
}

pub fn pagerank(g: &RawGraph, d: f64, iterations: u32) -> BTreeMap<i64, f64> {
    let last = pagerank_history(g, d, iterations).pop().unwrap();
    g.vertices.iter().copied().zip(last).collect()
}

/// One synchronous round: a label histogram per vertex built by scanning all arcs.
pub fn cdlp_round(g: &RawGraph, labels: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
    let arcs = g.arcs();
    g.vertices
        .iter()
        .map(|&v| {
            let mut hist: HashMap<i64, usize> = HashMap::new();
            for &(s, t, _) in &arcs {
                if t == v {
                    *hist.entry(labels[&s]).or_default() += 1;
                }
                if s == v {
                    *hist.entry(labels[&t]).or_default() += 1;
                }
            }
            let best = hist.values().copied().max();
            let label = match best {
                None => labels[&v],
                Some(top) => *hist
                    .iter()
                    .filter(|(_, &c)| c == top)
                    .map(|(l, _)| l)
                    .min()
                    .unwrap(),
            };
            (v, label)
        })
        .collect()
}

pub fn cdlp(g: &RawGraph, iterations: u32) -> BTreeMap<i64, i64> {
    let mut labels: BTreeMap<i64, i64> = g.vertices.iter().map(|&v| (v, v)).collect();
    for _ in 0..iterations {
        labels = cdlp_round(g, &labels);
    }
    labels
}

/// Ordered neighbor pairs joined by an arc, divided by the number of ordered pairs.
pub fn lcc(g: &RawGraph) -> BTreeMap<i64, f64> {
    let arcs: HashSet<(i64, i64)> = g.arcs().iter().map(|&(s, t, _)| (s, t)).collect();
    g.vertices
        .iter()
        .map(|&v| {
            let nbrs: Vec<i64> = g
                .vertices
                .iter()
                .copied()
                .filter(|&u| u != v && (arcs.contains(&(u, v)) || arcs.contains(&(v, u))))
                .collect();
            let k = nbrs.len();
            if k < 2 {
                return (v, 0.0);
            }
            let mut links = 0usize;
            for &a in &nbrs {
                for &b in &nbrs {
                    if a != b && arcs.contains(&(a, b)) {
                        links += 1;
                    }
                }
            }
            (v, links as f64 / (k * (k - 1)) as f64)
        })
        .collect()
}

/// Bellman-Ford relaxation until no distance changes.
pub fn sssp(g: &RawGraph, root: i64) -> BTreeMap<i64, f64> {
    let mut dist: BTreeMap<i64, f64> = g.vertices.iter().map(|&v| (v, f64::INFINITY)).collect();
    dist.insert(root, 0.0);
    let arcs = g.arcs();
    for _ in 0..g.vertices.len() {
        let mut changed = false;
        for &(s, t, w) in &arcs {
            let cand = dist[&s] + w;
            if cand < dist[&t] {
                dist.insert(t, cand);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}
