//! Graph encoding of the exploration state.
//!
//! At each decision point the explored history plus the frontier is turned
//! into an edge list with node/edge feature matrices and the positions of the
//! frontier edges. History edges always precede frontier edges. Undiscovered
//! frontier targets become placeholder nodes, deduplicated by plant-state
//! identity.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{ExpandEvent, Explorer, PlantIdx, TransId};
use crate::features::{edge_features, node_features, NormalizedAlphabet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEncoding {
    /// (source node id, target node id), history first, then frontier.
    pub edges: Vec<(u32, u32)>,
    /// One feature row per edge.
    pub edge_feats: Vec<Vec<f64>>,
    /// One feature row per node id.
    pub node_feats: Vec<Vec<f64>>,
    /// Positions of frontier edges within `edges`.
    pub frontier: Vec<usize>,
    /// Plant-state index behind each node id (placeholders included).
    pub node_plant: Vec<PlantIdx>,
}

impl GraphEncoding {
    pub fn node_count(&self) -> usize {
        self.node_feats.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of the frontier edges, deduplicated, ascending.
    pub fn frontier_endpoints(&self) -> Vec<u32> {
        let mut seeds: Vec<u32> = self
            .frontier
            .iter()
            .flat_map(|&i| [self.edges[i].0, self.edges[i].1])
            .collect();
        seeds.sort_unstable();
        seeds.dedup();
        seeds
    }

    pub fn dump_json(&self, path: &Path) -> std::io::Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, self).map_err(std::io::Error::from)
    }
}

fn encode(
    ex: &Explorer,
    alphabet: &NormalizedAlphabet,
    history: &[TransId],
    frontier: &[TransId],
    rank_of: impl Fn(PlantIdx) -> Option<u32>,
    discovered_count: usize,
) -> GraphEncoding {
    let mut node_plant: Vec<PlantIdx> = vec![u32::MAX; discovered_count];
    for idx in 0..ex.num_states() as u32 {
        if let Some(r) = rank_of(idx) {
            node_plant[r as usize] = idx;
        }
    }
    let mut placeholder: HashMap<PlantIdx, u32> = HashMap::new();
    let mut node_id = |state: PlantIdx, node_plant: &mut Vec<PlantIdx>| -> u32 {
        match rank_of(state) {
            Some(r) => r,
            None => *placeholder.entry(state).or_insert_with(|| {
                let id = node_plant.len() as u32;
                node_plant.push(state);
                id
            }),
        }
    };
    let mut edges = Vec::with_capacity(history.len() + frontier.len());
    let mut edge_feats = Vec::with_capacity(edges.capacity());
    for &tid in history {
        let t = ex.trans(tid);
        let from = node_id(t.source, &mut node_plant);
        let to = node_id(t.target, &mut node_plant);
        edges.push((from, to));
        edge_feats.push(edge_features(ex, alphabet, tid));
    }
    let mut frontier_pos = Vec::with_capacity(frontier.len());
    for &tid in frontier {
        let t = ex.trans(tid);
        let from = node_id(t.source, &mut node_plant);
        let to = node_id(t.target, &mut node_plant);
        frontier_pos.push(edges.len());
        edges.push((from, to));
        edge_feats.push(edge_features(ex, alphabet, tid));
    }
    let node_feats = node_plant
        .iter()
        .map(|&state| node_features(ex, state))
        .collect();
    GraphEncoding {
        edges,
        edge_feats,
        node_feats,
        frontier: frontier_pos,
        node_plant,
    }
}

/// Builds the encoding from scratch out of the explorer's current state.
pub fn build_graph(ex: &Explorer, alphabet: &NormalizedAlphabet) -> GraphEncoding {
    encode(
        ex,
        alphabet,
        ex.history(),
        &ex.frontier_canonical(),
        |s| ex.discovery_rank(s),
        ex.discovery_order().len(),
    )
}

/// Induced k-hop subgraph around `seeds` over the undirected view of the
/// edges. Returns the sub-encoding plus the mapping new node id → old node id.
pub fn khop_subgraph(g: &GraphEncoding, seeds: &[u32], k: u32) -> (GraphEncoding, Vec<u32>) {
    assert!(!seeds.is_empty(), "k-hop extraction needs at least one seed");
    let n = g.node_count();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut depth = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &s in seeds {
        if depth[s as usize] == u32::MAX {
            depth[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if depth[v as usize] == k {
            continue;
        }
        for &w in &adj[v as usize] {
            if depth[w as usize] == u32::MAX {
                depth[w as usize] = depth[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    let keep: Vec<u32> = (0..n as u32).filter(|&v| depth[v as usize] != u32::MAX).collect();
    let mut new_id = vec![u32::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        new_id[v as usize] = i as u32;
    }
    let mut edges = Vec::new();
    let mut edge_feats = Vec::new();
    let mut old_edge_pos = HashMap::new();
    for (pos, &(a, b)) in g.edges.iter().enumerate() {
        if new_id[a as usize] != u32::MAX && new_id[b as usize] != u32::MAX {
            old_edge_pos.insert(pos, edges.len());
            edges.push((new_id[a as usize], new_id[b as usize]));
            edge_feats.push(g.edge_feats[pos].clone());
        }
    }
    let frontier = g
        .frontier
        .iter()
        .filter_map(|pos| old_edge_pos.get(pos).copied())
        .collect();
    let node_feats = keep.iter().map(|&v| g.node_feats[v as usize].clone()).collect();
    let node_plant = keep.iter().map(|&v| g.node_plant[v as usize]).collect();
    (
        GraphEncoding { edges, edge_feats, node_feats, frontier, node_plant },
        keep,
    )
}

/// Event-driven second route to the same encoding: keeps its own history,
/// frontier, and discovery ranks, fed by [`ExpandEvent`]s.
pub struct IncrementalEncoder {
    history: Vec<TransId>,
    frontier: Vec<TransId>,
    rank_of: HashMap<PlantIdx, u32>,
}

impl IncrementalEncoder {
    pub fn new(ex: &Explorer) -> IncrementalEncoder {
        let mut rank_of = HashMap::new();
        rank_of.insert(ex.initial(), 0);
        IncrementalEncoder {
            history: Vec::new(),
            frontier: ex.frontier_canonical(),
            rank_of,
        }
    }

    pub fn on_expand(&mut self, event: &ExpandEvent) {
        let pos = self
            .frontier
            .iter()
            .position(|&t| t == event.expanded)
            .expect("expanded transition must be a tracked frontier member");
        self.frontier.remove(pos);
        self.history.push(event.expanded);
        if let Some(state) = event.newly_discovered {
            let rank = self.rank_of.len() as u32;
            self.rank_of.insert(state, rank);
        }
        // New transitions come from the freshest discovery; appending keeps
        // the frontier sorted by (source rank, transition id).
        self.frontier.extend(event.new_transitions.clone());
    }

    pub fn snapshot(&self, ex: &Explorer, alphabet: &NormalizedAlphabet) -> GraphEncoding {
        encode(
            ex,
            alphabet,
            &self.history,
            &self.frontier,
            |s| self.rank_of.get(&s).copied(),
            self.rank_of.len(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
    use crate::engine::Explorer;
    use crate::features::NormalizedAlphabet;

    #[test]
    fn initial_encoding_has_frontier_only() {
        // TL(2,1) initial state: two machines idle, so two take transitions.
        let model = generate_benchmark(BenchmarkSpec::new(Domain::TL, 2, 1));
        let alphabet = NormalizedAlphabet::from_model(&model);
        let ex = Explorer::new(&model);
        let g = build_graph(&ex, &alphabet);
        assert_eq!(g.edge_count(), ex.frontier_len());
        assert_eq!(g.frontier, (0..g.edge_count()).collect::<Vec<_>>());
        // Distinct targets get distinct placeholder nodes; source is node 0.
        assert_eq!(g.node_count(), 1 + ex.frontier_len());
    }

    #[test]
    fn history_precedes_frontier() {
        let model = generate_benchmark(BenchmarkSpec::new(Domain::AT, 2, 2));
        let alphabet = NormalizedAlphabet::from_model(&model);
        let mut ex = Explorer::new(&model);
        for _ in 0..5 {
            let t = ex.frontier_canonical()[0];
            ex.expand(t).unwrap();
        }
        let g = build_graph(&ex, &alphabet);
        let h = ex.history().len();
        assert_eq!(g.frontier, (h..g.edge_count()).collect::<Vec<_>>());
        assert_eq!(g.frontier.len(), ex.frontier_len());
    }

    #[test]
    fn empty_frontier_means_no_frontier_indices() {
        let model = generate_benchmark(BenchmarkSpec::new(Domain::AT, 1, 1));
        let alphabet = NormalizedAlphabet::from_model(&model);
        let mut ex = Explorer::new(&model);
        while ex.frontier_len() > 0 {
            let t = ex.frontier_canonical()[0];
            ex.expand(t).unwrap();
        }
        let g = build_graph(&ex, &alphabet);
        assert!(g.frontier.is_empty());
        assert_eq!(g.edge_count(), ex.history().len());
    }

    #[test]
    fn khop_zero_keeps_only_seeds() {
        let g = line_graph(4);
        let (sub, map) = khop_subgraph(&g, &[1], 0);
        assert_eq!(map, vec![1]);
        assert_eq!(sub.edge_count(), 0);
    }

    #[test]
    fn khop_beyond_diameter_is_identity() {
        let g = line_graph(5);
        let (sub, map) = khop_subgraph(&g, &[0], 10);
        assert_eq!(map, (0..5).collect::<Vec<_>>());
        assert_eq!(sub.edges, g.edges);
        assert_eq!(sub.frontier, g.frontier);
    }

    #[test]
    fn khop_matches_independent_bfs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..20usize);
            let m = rng.gen_range(1..40usize);
            let edges: Vec<(u32, u32)> = (0..m)
                .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
                .collect();
            let g = GraphEncoding {
                edge_feats: vec![vec![0.0]; edges.len()],
                node_feats: vec![vec![0.0]; n],
                frontier: vec![],
                node_plant: (0..n as u32).collect(),
                edges,
            };
            let seed = rng.gen_range(0..n as u32);
            let k = rng.gen_range(0..4u32);
            let (_, kept) = khop_subgraph(&g, &[seed], k);
            // Plain BFS to depth k, written independently.
            let mut level = vec![seed];
            let mut seen = std::collections::BTreeSet::from([seed]);
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
            assert_eq!(kept, seen.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn khop_is_monotone_in_k() {
        let g = line_graph(8);
        let (_, k1) = khop_subgraph(&g, &[3], 1);
        let (_, k2) = khop_subgraph(&g, &[3], 2);
        assert!(k1.iter().all(|v| k2.contains(v)));
    }

    #[test]
    fn incremental_encoding_equals_scratch_rebuild() {
        let model = generate_benchmark(BenchmarkSpec::new(Domain::AT, 1, 1));
        let alphabet = NormalizedAlphabet::from_model(&model);
        let mut ex = Explorer::new(&model);
        let mut inc = IncrementalEncoder::new(&ex);
        assert_eq!(inc.snapshot(&ex, &alphabet), build_graph(&ex, &alphabet));
        while ex.frontier_len() > 0 {
            let t = ex.frontier_canonical()[0];
            let event = ex.expand(t).unwrap();
            inc.on_expand(&event);
            assert_eq!(inc.snapshot(&ex, &alphabet), build_graph(&ex, &alphabet));
        }
    }

    fn line_graph(n: usize) -> GraphEncoding {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        GraphEncoding {
            edge_feats: vec![vec![0.0]; edges.len()],
            node_feats: vec![vec![0.0]; n],
            frontier: vec![n - 2],
            node_plant: (0..n as u32).collect(),
            edges,
        }
    }
}
