//! Independent reference implementations used by the integration tests.
//! Deliberately written against the public data layout, not the production
//! code paths: dense matrices instead of sparse propagation, naive BFS
//! instead of the engine's bookkeeping.

use dcsynth::graph::GraphEncoding;
use dcsynth::nn::{Aggregation, GnnModel};
use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Frontier scores via dense matrix products, one layer at a time.
pub fn dense_gnn_scores(model: &GnnModel, g: &GraphEncoding) -> Vec<f64> {
    let n = g.node_count();
    let mut a = Array2::<f64>::eye(n);
    for &(u, v) in &g.edges {
        if u != v {
            a[[u as usize, v as usize]] += 1.0;
            a[[v as usize, u as usize]] += 1.0;
        }
    }
    if model.agg == Aggregation::NormalizedSym {
        let deg: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
        for i in 0..n {
            for j in 0..n {
                a[[i, j]] /= (deg[i] * deg[j]).sqrt();
            }
        }
    }
    let f_n = model.node_dim();
    let mut x = Array2::<f64>::zeros((n, f_n));
    for (i, row) in g.node_feats.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            x[[i, j]] = v;
        }
    }
    let z1 = (a.dot(&x).dot(&model.w1) + &model.b1).mapv(|v| v.max(0.0));
    let z2 = (a.dot(&z1).dot(&model.w2) + &model.b2).mapv(|v| v.max(0.0));
    let h = model.hidden_dim();
    g.frontier
        .iter()
        .map(|&pos| {
            let (u, v) = g.edges[pos];
            let mut cat = Vec::with_capacity(2 * h + g.edge_feats[pos].len());
            cat.extend(z2.row(u as usize).iter());
            cat.extend(z2.row(v as usize).iter());
            cat.extend(g.edge_feats[pos].iter());
            let cat = Array1::from_vec(cat);
            let hid = (cat.dot(&model.mw1) + &model.mb1).mapv(|v| v.max(0.0));
            hid.dot(&model.mw2)[0] + model.mb2[0]
        })
        .collect()
}

/// Nodes within `k` undirected hops of `seeds`, by plain level-by-level BFS.
pub fn bfs_khop_nodes(g: &GraphEncoding, seeds: &[u32], k: u32) -> Vec<u32> {
    let mut seen: std::collections::BTreeSet<u32> = seeds.iter().copied().collect();
    let mut level: Vec<u32> = seen.iter().copied().collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for &v in &level {
            for &(a, b) in &g.edges {
                if a == v && seen.insert(b) {
                    next.push(b);
                }
                if b == v && seen.insert(a) {
                    next.push(a);
                }
            }
        }
        level = next;
    }
    seen.into_iter().collect()
}

/// Connected random graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    f_n: usize,
    f_e: usize,
) -> GraphEncoding {
    let n = rng.gen_range(2..12usize);
    let mut edges: Vec<(u32, u32)> = (1..n as u32)
        .map(|v| (rng.gen_range(0..v), v))
        .collect();
    for _ in 0..rng.gen_range(0..8) {
        edges.push((rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)));
    }
    let m = edges.len();
    let nf = rng.gen_range(1..=m);
    GraphEncoding {
        node_feats: (0..n)
            .map(|_| (0..f_n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect(),
        edge_feats: (0..m)
            .map(|_| (0..f_e).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect(),
        frontier: (m - nf..m).collect(),
        node_plant: (0..n as u32).collect(),
        edges,
    }
}
