//! Show the graph encoding fed to the GNN: expand a few transitions of
//! AT(1,1), then print the edge list, the frontier indices, and the feature
//! dimensions, plus the full encoding as JSON.

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::engine::Explorer;
use dcsynth::features::NormalizedAlphabet;
use dcsynth::graph::{build_graph, khop_subgraph};

fn main() {
    let model = generate_benchmark(BenchmarkSpec::new(Domain::AT, 1, 1));
    let alphabet = NormalizedAlphabet::from_model(&model);
    let mut ex = Explorer::new(&model);
    for _ in 0..2 {
        let tid = ex.frontier_canonical()[0];
        ex.expand(tid).unwrap();
    }

    let g = build_graph(&ex, &alphabet);
    println!("nodes: {}, edges: {:?}", g.node_count(), g.edges);
    println!("frontier edge positions: {:?}", g.frontier);
    println!(
        "node features: {}x{}, edge features: {}x{}",
        g.node_feats.len(),
        g.node_feats[0].len(),
        g.edge_feats.len(),
        g.edge_feats[0].len()
    );

    let (sub, kept) = khop_subgraph(&g, &g.frontier_endpoints(), 2);
    println!("2-hop subgraph keeps nodes {kept:?}");
    println!("{}", serde_json::to_string_pretty(&sub).unwrap());
}
