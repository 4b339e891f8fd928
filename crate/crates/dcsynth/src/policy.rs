//! Exploration policies: which frontier transition to expand next.
//!
//! Fixed heuristics (random, BFS, DFS, the ready-abstraction heuristic RA)
//! plus the two learned policies: a flat-feature Q-network and the GNN over
//! the k-hop exploration graph. Ties always break in canonical frontier
//! order, so every policy is deterministic given its RNG stream.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{ExplorationPolicy, Explorer, TransId};
use crate::features::{phi, NormalizedAlphabet};
use crate::graph::{build_graph, khop_subgraph};
use crate::lts::{Automaton, CompositeModel, StateId};
use crate::nn::{load_gnn, load_qnet, GnnModel, NnError, QNet};

pub const DEFAULT_KHOP: u32 = 2;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("unknown policy spec {0:?} (expected random|bfs|dfs|ra|rl:<path>|gcrl:<path>[:k])")]
    UnknownSpec(String),
    #[error(transparent)]
    Weights(#[from] NnError),
    #[error("weights were trained for a different feature dimension: model needs {expected}, file has {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Parsed form of a policy command-line spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicySpec {
    Random,
    Bfs,
    Dfs,
    Ra,
    Rl { weights: PathBuf },
    Gcrl { weights: PathBuf, k: u32 },
}

impl FromStr for PolicySpec {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<PolicySpec, PolicyError> {
        match s {
            "random" => return Ok(PolicySpec::Random),
            "bfs" => return Ok(PolicySpec::Bfs),
            "dfs" => return Ok(PolicySpec::Dfs),
            "ra" => return Ok(PolicySpec::Ra),
            _ => {}
        }
        if let Some(path) = s.strip_prefix("rl:") {
            if path.is_empty() {
                return Err(PolicyError::UnknownSpec(s.into()));
            }
            return Ok(PolicySpec::Rl { weights: path.into() });
        }
        if let Some(rest) = s.strip_prefix("gcrl:") {
            // The weight path may contain ':' only if the trailing segment is
            // not a valid hop count.
            let (path, k) = match rest.rsplit_once(':') {
                Some((p, ks)) => match ks.parse::<u32>() {
                    Ok(k) if !p.is_empty() => (p, k),
                    _ => (rest, DEFAULT_KHOP),
                },
                None => (rest, DEFAULT_KHOP),
            };
            if path.is_empty() {
                return Err(PolicyError::UnknownSpec(s.into()));
            }
            return Ok(PolicySpec::Gcrl { weights: path.into(), k });
        }
        Err(PolicyError::UnknownSpec(s.into()))
    }
}

impl PolicySpec {
    /// Instantiates the policy for `model`, loading weights when needed.
    pub fn build(&self, model: &CompositeModel) -> Result<Box<dyn ExplorationPolicy>, PolicyError> {
        Ok(match self {
            PolicySpec::Random => Box::new(RandomPolicy),
            PolicySpec::Bfs => Box::new(BfsPolicy),
            PolicySpec::Dfs => Box::new(DfsPolicy),
            PolicySpec::Ra => Box::new(RaPolicy::new(model)),
            PolicySpec::Rl { weights } => Box::new(RlPolicy::load(weights, model)?),
            PolicySpec::Gcrl { weights, k } => Box::new(GcrlPolicy::load(weights, model, *k)?),
        })
    }
}

/// Uniform choice over the frontier.
pub struct RandomPolicy;

impl ExplorationPolicy for RandomPolicy {
    fn select(&mut self, ex: &Explorer, rng: &mut ChaCha8Rng) -> TransId {
        let frontier = ex.frontier_canonical();
        frontier[rng.gen_range(0..frontier.len())]
    }
    fn name(&self) -> String {
        "random".into()
    }
}

/// Breadth-first: expand from the oldest discovered source.
pub struct BfsPolicy;

impl ExplorationPolicy for BfsPolicy {
    fn select(&mut self, ex: &Explorer, _rng: &mut ChaCha8Rng) -> TransId {
        ex.frontier_canonical()[0]
    }
    fn name(&self) -> String {
        "bfs".into()
    }
}

/// Depth-first: expand from the newest discovered source, first of its
/// enumerated transitions.
pub struct DfsPolicy;

impl ExplorationPolicy for DfsPolicy {
    fn select(&mut self, ex: &Explorer, _rng: &mut ChaCha8Rng) -> TransId {
        let frontier = ex.frontier_canonical();
        let newest = *frontier.last().expect("select requires a nonempty frontier");
        let max_rank = ex.discovery_rank(ex.trans(newest).source);
        *frontier
            .iter()
            .find(|&&t| ex.discovery_rank(ex.trans(t).source) == max_rank)
            .unwrap()
    }
    fn name(&self) -> String {
        "dfs".into()
    }
}

/// Ready-abstraction heuristic: rank frontier transitions by an abstraction
/// distance to marking, computed per component and maximized across them.
/// Uncontrollable transitions go first, unreachable-marking targets last,
/// otherwise ascending distance; ties in canonical order.
pub struct RaPolicy {
    /// Per component: local distance from each state to its nearest marked
    /// state, `u32::MAX` when none is reachable.
    local_dist: Vec<Vec<u32>>,
}

impl RaPolicy {
    pub fn new(model: &CompositeModel) -> RaPolicy {
        RaPolicy { local_dist: model.components.iter().map(component_marked_distances).collect() }
    }

    /// Abstraction distance of a plant state: the worst component distance.
    pub fn abstraction_distance(&self, local: &[StateId]) -> u32 {
        local
            .iter()
            .enumerate()
            .map(|(c, &s)| self.local_dist[c][s as usize])
            .max()
            .unwrap_or(0)
    }

    /// Comparison key; lower is better.
    pub fn key(&self, ex: &Explorer, tid: TransId) -> (bool, bool, u32) {
        let t = ex.trans(tid);
        let d = self.abstraction_distance(ex.local_state(t.target));
        (t.controllable, d == u32::MAX, d)
    }
}

/// Forward distance from every state of one automaton to its nearest marked
/// state, by reverse BFS from the marked states.
fn component_marked_distances(a: &Automaton) -> Vec<u32> {
    let n = a.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (s, row) in a.transitions.iter().enumerate() {
        for &(_, t) in row {
            preds[t as usize].push(s as StateId);
        }
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        if a.marked[s] {
            dist[s] = 0;
            queue.push_back(s as StateId);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &p in &preds[s as usize] {
            if dist[p as usize] == u32::MAX {
                dist[p as usize] = dist[s as usize] + 1;
                queue.push_back(p);
            }
        }
    }
    dist
}

impl ExplorationPolicy for RaPolicy {
    fn select(&mut self, ex: &Explorer, _rng: &mut ChaCha8Rng) -> TransId {
        let frontier = ex.frontier_canonical();
        *frontier
            .iter()
            .min_by_key(|&&t| self.key(ex, t))
            .expect("select requires a nonempty frontier")
    }
    fn name(&self) -> String {
        "ra".into()
    }
}

/// Greedy (optionally ε-greedy) policy over a flat-feature Q-network.
pub struct RlPolicy {
    pub qnet: QNet,
    pub alphabet: NormalizedAlphabet,
    pub epsilon: f64,
}

impl RlPolicy {
    pub fn new(qnet: QNet, model: &CompositeModel) -> Result<RlPolicy, PolicyError> {
        let alphabet = NormalizedAlphabet::from_model(model);
        let expected = crate::features::phi_dim(alphabet.len());
        if qnet.input_dim() != expected {
            return Err(PolicyError::DimensionMismatch { expected, found: qnet.input_dim() });
        }
        Ok(RlPolicy { qnet, alphabet, epsilon: 0.0 })
    }

    pub fn load(path: &Path, model: &CompositeModel) -> Result<RlPolicy, PolicyError> {
        RlPolicy::new(load_qnet(path)?, model)
    }

    pub fn q_values(&self, ex: &Explorer) -> Vec<f64> {
        ex.frontier_canonical()
            .iter()
            .map(|&t| self.qnet.q(&phi(ex, &self.alphabet, t)))
            .collect()
    }
}

impl ExplorationPolicy for RlPolicy {
    fn select(&mut self, ex: &Explorer, rng: &mut ChaCha8Rng) -> TransId {
        let frontier = ex.frontier_canonical();
        if self.epsilon > 0.0 && rng.gen::<f64>() < self.epsilon {
            return frontier[rng.gen_range(0..frontier.len())];
        }
        let qs = self.q_values(ex);
        frontier[argmax(&qs)]
    }
    fn name(&self) -> String {
        "rl".into()
    }
}

/// Greedy (optionally ε-greedy) policy over the GNN edge scores of the k-hop
/// exploration graph around the frontier.
pub struct GcrlPolicy {
    pub gnn: GnnModel,
    pub alphabet: NormalizedAlphabet,
    pub k: u32,
    pub epsilon: f64,
}

impl GcrlPolicy {
    pub fn new(gnn: GnnModel, model: &CompositeModel, k: u32) -> Result<GcrlPolicy, PolicyError> {
        let alphabet = NormalizedAlphabet::from_model(model);
        let expected = crate::features::edge_feature_dim(alphabet.len());
        if gnn.edge_dim() != expected {
            return Err(PolicyError::DimensionMismatch { expected, found: gnn.edge_dim() });
        }
        Ok(GcrlPolicy { gnn, alphabet, k, epsilon: 0.0 })
    }

    pub fn load(path: &Path, model: &CompositeModel, k: u32) -> Result<GcrlPolicy, PolicyError> {
        GcrlPolicy::new(load_gnn(path)?, model, k)
    }

    /// Scores for the canonical frontier, via the k-hop subgraph around it.
    pub fn q_values(&self, ex: &Explorer) -> Vec<f64> {
        let g = build_graph(ex, &self.alphabet);
        let (sub, _) = khop_subgraph(&g, &g.frontier_endpoints(), self.k);
        debug_assert_eq!(sub.frontier.len(), g.frontier.len());
        self.gnn.scores(&sub)
    }
}

impl ExplorationPolicy for GcrlPolicy {
    fn select(&mut self, ex: &Explorer, rng: &mut ChaCha8Rng) -> TransId {
        let frontier = ex.frontier_canonical();
        if self.epsilon > 0.0 && rng.gen::<f64>() < self.epsilon {
            return frontier[rng.gen_range(0..frontier.len())];
        }
        let qs = self.q_values(ex);
        frontier[argmax(&qs)]
    }
    fn name(&self) -> String {
        "gcrl".into()
    }
}

/// Index of the maximum, first occurrence on ties.
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}
