//! DQN training of the exploration policies, snapshot selection, and grid
//! evaluation.
//!
//! Both learners share the same loop: ε-greedy episodes on one training
//! instance, reward −1 per expansion, a bounded replay buffer, one gradient
//! step per environment step, and a periodically synced target network.
//! Weights are snapshotted after every episode; selection picks the snapshot
//! that generalizes best to a few larger instances.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use crate::engine::{run_dcs, Class, Explorer};
use crate::features::{edge_feature_dim, phi, phi_dim, NormalizedAlphabet, NODE_FEATURE_DIM};
use crate::graph::{build_graph, khop_subgraph, GraphEncoding};
use crate::nn::{clip_grad_norm, Adam, Aggregation, GnnModel, QNet};
use crate::policy::{argmax, GcrlPolicy, PolicySpec, RlPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Gcrl,
    Rl,
}

impl std::str::FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Algo, String> {
        match s {
            "gcrl" => Ok(Algo::Gcrl),
            "rl" => Ok(Algo::Rl),
            other => Err(format!("unknown algorithm `{other}` (expected gcrl or rl)")),
        }
    }
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algo::Gcrl => "gcrl",
            Algo::Rl => "rl",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub algo: Algo,
    pub domain: Domain,
    pub n: u32,
    pub k: u32,
    pub episodes: u32,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Environment steps over which ε anneals linearly before holding.
    pub epsilon_decay_steps: u64,
    pub gamma: f64,
    pub replay_capacity: usize,
    pub batch_size: usize,
    /// Gradient steps between target-network syncs.
    pub target_sync: u64,
    pub lr: f64,
    pub grad_clip: f64,
    pub khop: u32,
    pub hidden: usize,
    pub mlp_hidden: usize,
    pub aggregation: Aggregation,
    /// Safety cap on episode length; training instances solve well below it.
    pub episode_budget: u64,
    pub seed: u64,
}

impl TrainConfig {
    pub fn new(algo: Algo, domain: Domain, seed: u64) -> TrainConfig {
        TrainConfig {
            algo,
            domain,
            n: 2,
            k: 2,
            episodes: 100,
            epsilon_start: 1.0,
            epsilon_end: 0.01,
            epsilon_decay_steps: 1000,
            gamma: 1.0,
            replay_capacity: 10_000,
            batch_size: 32,
            target_sync: 200,
            lr: 1e-3,
            grad_clip: 10.0,
            khop: 2,
            hidden: 32,
            mlp_hidden: 64,
            aggregation: Aggregation::NormalizedSym,
            episode_budget: 10_000,
            seed,
        }
    }

    pub fn epsilon_at(&self, env_step: u64) -> f64 {
        let frac = (env_step as f64 / self.epsilon_decay_steps as f64).min(1.0);
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac
    }
}

struct ReplayItem<Obs> {
    obs: Obs,
    action: usize,
    reward: f64,
    /// `None` at episode end.
    next: Option<Obs>,
}

/// What the shared DQN loop needs from a concrete function approximator.
trait Learner {
    type Obs: Clone;
    fn observe(&self, ex: &Explorer) -> Self::Obs;
    fn q_online(&self, obs: &Self::Obs) -> Vec<f64>;
    /// Mini-batch gradient step; returns the batch loss.
    fn learn(&mut self, batch: &[&ReplayItem<Self::Obs>], gamma: f64) -> f64;
    fn sync_target(&mut self);
    fn params(&self) -> Vec<f64>;
}

struct GcrlLearner {
    online: GnnModel,
    target: GnnModel,
    opt: Adam,
    alphabet: NormalizedAlphabet,
    khop: u32,
    grad_clip: f64,
}

impl Learner for GcrlLearner {
    type Obs = GraphEncoding;

    fn observe(&self, ex: &Explorer) -> GraphEncoding {
        let g = build_graph(ex, &self.alphabet);
        khop_subgraph(&g, &g.frontier_endpoints(), self.khop).0
    }

    fn q_online(&self, obs: &GraphEncoding) -> Vec<f64> {
        self.online.scores(obs)
    }

    fn learn(&mut self, batch: &[&ReplayItem<GraphEncoding>], gamma: f64) -> f64 {
        let mut grad = vec![0.0; self.online.num_params()];
        let mut loss = 0.0;
        let scale = 1.0 / batch.len() as f64;
        for item in batch {
            let (scores, cache) = self.online.forward(&item.obs);
            let q = scores[item.action];
            let y = match &item.next {
                Some(next) => {
                    let tq = self.target.scores(next);
                    item.reward + gamma * tq.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                }
                None => item.reward,
            };
            let err = q - y;
            loss += err * err * scale;
            let mut dscores = vec![0.0; scores.len()];
            dscores[item.action] = 2.0 * err * scale;
            let g = self.online.backward(&cache, &dscores);
            for (acc, d) in grad.iter_mut().zip(&g) {
                *acc += d;
            }
        }
        clip_grad_norm(&mut grad, self.grad_clip);
        let mut flat = self.online.flatten();
        self.opt.step(&mut flat, &grad);
        self.online.assign_from_flat(&flat);
        loss
    }

    fn sync_target(&mut self) {
        self.target = self.online.clone();
    }

    fn params(&self) -> Vec<f64> {
        self.online.flatten()
    }
}

struct RlLearner {
    online: QNet,
    target: QNet,
    opt: Adam,
    alphabet: NormalizedAlphabet,
    grad_clip: f64,
}

impl Learner for RlLearner {
    /// φ rows for every frontier action, in canonical order.
    type Obs = Vec<Vec<f64>>;

    fn observe(&self, ex: &Explorer) -> Vec<Vec<f64>> {
        ex.frontier_canonical()
            .iter()
            .map(|&t| phi(ex, &self.alphabet, t))
            .collect()
    }

    fn q_online(&self, obs: &Vec<Vec<f64>>) -> Vec<f64> {
        obs.iter().map(|row| self.online.q(row)).collect()
    }

    fn learn(&mut self, batch: &[&ReplayItem<Vec<Vec<f64>>>], gamma: f64) -> f64 {
        let mut grad = vec![0.0; self.online.flatten().len()];
        let mut loss = 0.0;
        let scale = 1.0 / batch.len() as f64;
        for item in batch {
            let (q, cache) = self.online.forward(&item.obs[item.action]);
            let y = match &item.next {
                Some(next) => {
                    let best = next
                        .iter()
                        .map(|row| self.target.q(row))
                        .fold(f64::NEG_INFINITY, f64::max);
                    item.reward + gamma * best
                }
                None => item.reward,
            };
            let err = q - y;
            loss += err * err * scale;
            let g = self.online.backward(&cache, 2.0 * err * scale);
            for (acc, d) in grad.iter_mut().zip(&g) {
                *acc += d;
            }
        }
        clip_grad_norm(&mut grad, self.grad_clip);
        let mut flat = self.online.flatten();
        self.opt.step(&mut flat, &grad);
        self.online.assign_from_flat(&flat);
        loss
    }

    fn sync_target(&mut self) {
        self.target = self.online.clone();
    }

    fn params(&self) -> Vec<f64> {
        self.online.flatten()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub episode: u32,
    pub expansions: u64,
    pub ret: f64,
    pub epsilon: f64,
    pub loss_mean: f64,
}

pub struct TrainResult {
    pub config: TrainConfig,
    pub log: Vec<EpisodeLog>,
    /// Flat parameter vector after each episode.
    pub snapshots: Vec<Vec<f64>>,
    /// Final weights (same as the last snapshot).
    pub final_params: Vec<f64>,
}

impl TrainResult {
    /// Area under the training curve: the sum of episode returns.
    pub fn auc(&self) -> f64 {
        self.log.iter().map(|e| e.ret).sum()
    }

    /// Rebuilds a model with this run's architecture from a flat snapshot.
    pub fn gnn_from_params(&self, params: &[f64]) -> GnnModel {
        let mut model = fresh_gnn(&self.config);
        model.assign_from_flat(params);
        model
    }

    pub fn qnet_from_params(&self, params: &[f64]) -> QNet {
        let mut model = fresh_qnet(&self.config);
        model.assign_from_flat(params);
        model
    }
}

fn training_alphabet(config: &TrainConfig) -> NormalizedAlphabet {
    let model = generate_benchmark(BenchmarkSpec::new(config.domain, config.n, config.k));
    NormalizedAlphabet::from_model(&model)
}

fn fresh_gnn(config: &TrainConfig) -> GnnModel {
    let alphabet = training_alphabet(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    GnnModel::new(
        NODE_FEATURE_DIM,
        config.hidden,
        edge_feature_dim(alphabet.len()),
        config.mlp_hidden,
        config.aggregation,
        &mut rng,
    )
}

fn fresh_qnet(config: &TrainConfig) -> QNet {
    let alphabet = training_alphabet(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    QNet::new(phi_dim(alphabet.len()), config.mlp_hidden, &mut rng)
}

pub fn train(config: &TrainConfig) -> TrainResult {
    match config.algo {
        Algo::Gcrl => {
            let online = fresh_gnn(config);
            let learner = GcrlLearner {
                target: online.clone(),
                opt: Adam::new(config.lr, online.num_params()),
                online,
                alphabet: training_alphabet(config),
                khop: config.khop,
                grad_clip: config.grad_clip,
            };
            train_loop(config, learner)
        }
        Algo::Rl => {
            let online = fresh_qnet(config);
            let learner = RlLearner {
                target: online.clone(),
                opt: Adam::new(config.lr, online.flatten().len()),
                online,
                alphabet: training_alphabet(config),
                grad_clip: config.grad_clip,
            };
            train_loop(config, learner)
        }
    }
}

fn train_loop<L: Learner>(config: &TrainConfig, mut learner: L) -> TrainResult {
    let model = generate_benchmark(BenchmarkSpec::new(config.domain, config.n, config.k));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut replay: VecDeque<ReplayItem<L::Obs>> = VecDeque::new();
    let mut env_step: u64 = 0;
    let mut grad_steps: u64 = 0;
    let mut log = Vec::with_capacity(config.episodes as usize);
    let mut snapshots = Vec::with_capacity(config.episodes as usize);
    for episode in 0..config.episodes {
        let mut ex = Explorer::new(&model);
        let mut obs = learner.observe(&ex);
        let mut expansions: u64 = 0;
        let mut losses = Vec::new();
        let mut episode_eps = config.epsilon_at(env_step);
        while ex.class(ex.initial()) == Class::Undecided
            && ex.frontier_len() > 0
            && expansions < config.episode_budget
        {
            let epsilon = config.epsilon_at(env_step);
            episode_eps = epsilon;
            let frontier = ex.frontier_canonical();
            let action = if rng.gen::<f64>() < epsilon {
                rng.gen_range(0..frontier.len())
            } else {
                argmax(&learner.q_online(&obs))
            };
            ex.expand(frontier[action]).expect("frontier action");
            expansions += 1;
            env_step += 1;
            let terminal =
                ex.class(ex.initial()) != Class::Undecided || ex.frontier_len() == 0;
            let next = (!terminal).then(|| learner.observe(&ex));
            if replay.len() == config.replay_capacity {
                replay.pop_front();
            }
            replay.push_back(ReplayItem {
                obs: obs.clone(),
                action,
                reward: -1.0,
                next: next.clone(),
            });
            if let Some(n) = next {
                obs = n;
            }
            if replay.len() >= config.batch_size {
                let batch: Vec<&ReplayItem<L::Obs>> = (0..config.batch_size)
                    .map(|_| &replay[rng.gen_range(0..replay.len())])
                    .collect();
                losses.push(learner.learn(&batch, config.gamma));
                grad_steps += 1;
                if grad_steps % config.target_sync == 0 {
                    learner.sync_target();
                }
            }
        }
        let loss_mean = if losses.is_empty() {
            0.0
        } else {
            losses.iter().sum::<f64>() / losses.len() as f64
        };
        log.push(EpisodeLog {
            episode,
            expansions,
            ret: -(expansions as f64),
            epsilon: episode_eps,
            loss_mean,
        });
        snapshots.push(learner.params());
    }
    TrainResult {
        config: config.clone(),
        log,
        final_params: learner.params(),
        snapshots,
    }
}

// ── Snapshot selection ────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Episode index of the winning snapshot.
    pub episode: u32,
    pub solved: u32,
    pub expansions: u64,
    /// (n, k) instances used for selection.
    pub instances: Vec<(u32, u32)>,
    pub budget: u64,
}

pub const SELECTION_INSTANCES: [(u32, u32); 3] = [(3, 3), (4, 4), (5, 5)];
pub const SELECTION_BUDGET: u64 = 1000;

/// Evaluates every snapshot on a few larger instances and picks the one that
/// solves the most, breaking ties by fewer total expansions, then by the
/// later episode.
pub fn select_snapshot(
    result: &TrainResult,
    instances: &[(u32, u32)],
    budget: u64,
) -> SelectionReport {
    let all: Vec<usize> = (0..result.snapshots.len()).collect();
    select_snapshot_among(result, &all, instances, budget)
}

/// Snapshot selection restricted to the given episode indices, for when
/// scoring every snapshot is too expensive.
pub fn select_snapshot_among(
    result: &TrainResult,
    episodes: &[usize],
    instances: &[(u32, u32)],
    budget: u64,
) -> SelectionReport {
    let models: Vec<_> = instances
        .iter()
        .map(|&(n, k)| generate_benchmark(BenchmarkSpec::new(result.config.domain, n, k)))
        .collect();
    let mut best: Option<(u32, u64, usize)> = None; // (solved, expansions, episode)
    for &episode in episodes {
        let params = &result.snapshots[episode];
        let mut solved = 0;
        let mut expansions = 0;
        for model in &models {
            let verdict = match result.config.algo {
                Algo::Gcrl => {
                    let mut p = GcrlPolicy::new(
                        result.gnn_from_params(params),
                        model,
                        result.config.khop,
                    )
                    .expect("training architecture matches the family");
                    run_dcs(model, &mut p, budget, result.config.seed)
                }
                Algo::Rl => {
                    let mut p = RlPolicy::new(result.qnet_from_params(params), model)
                        .expect("training architecture matches the family");
                    run_dcs(model, &mut p, budget, result.config.seed)
                }
            };
            if verdict.decided {
                solved += 1;
            }
            expansions += verdict.expansions;
        }
        let better = match best {
            None => true,
            Some((s, e, ep)) => {
                (solved, std::cmp::Reverse(expansions), episode)
                    > (s, std::cmp::Reverse(e), ep)
            }
        };
        if better {
            best = Some((solved, expansions, episode));
        }
    }
    let (solved, expansions, episode) = best.expect("at least one snapshot");
    SelectionReport {
        episode: episode as u32,
        solved,
        expansions,
        instances: instances.to_vec(),
        budget,
    }
}

// ── Grid evaluation ───────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    pub domain: Domain,
    pub n: u32,
    pub k: u32,
    pub policy: String,
    pub solved: bool,
    pub expansions: u64,
    pub millis: u64,
    pub seed: u64,
}

pub const EVAL_BUDGET: u64 = 5000;

/// Runs a policy over the (n, k) grid in nondecreasing n+k order. An instance
/// is attempted only when all its in-grid predecessors (n−1, k) and (n, k−1)
/// were solved, mirroring how the benchmark curves are reported.
pub fn eval_grid(
    domain: Domain,
    max_n: u32,
    max_k: u32,
    spec: &PolicySpec,
    budget: u64,
    seed: u64,
) -> Result<Vec<EvalRecord>, crate::policy::PolicyError> {
    let mut cells: Vec<(u32, u32)> = (1..=max_n)
        .flat_map(|n| (1..=max_k).map(move |k| (n, k)))
        .collect();
    cells.sort_by_key(|&(n, k)| (n + k, n));
    let mut solved_set = std::collections::HashSet::new();
    let mut records = Vec::new();
    for (n, k) in cells {
        let reachable = (n == 1 || solved_set.contains(&(n - 1, k)))
            && (k == 1 || solved_set.contains(&(n, k - 1)));
        if !reachable {
            continue;
        }
        let model = generate_benchmark(BenchmarkSpec::new(domain, n, k));
        let mut policy = spec.build(&model)?;
        let start = Instant::now();
        let verdict = run_dcs(&model, policy.as_mut(), budget, seed);
        let millis = start.elapsed().as_millis() as u64;
        if verdict.decided {
            solved_set.insert((n, k));
        }
        records.push(EvalRecord {
            domain,
            n,
            k,
            policy: policy.name(),
            solved: verdict.decided,
            expansions: verdict.expansions,
            millis,
            seed,
        });
    }
    Ok(records)
}

// ── CSV output ────────────────────────────────────────────────────────

/// FNV-1a over the canonical JSON of a config, for output stamping.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("config serializes");
    let mut h: u64 = 0xcbf29ce484222325;
    for b in json.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// `#`-comment header stamped onto every CSV artifact.
pub fn csv_stamp(seed: u64, hash: &str) -> String {
    format!(
        "# dcsynth {} seed={} config={}\n",
        env!("CARGO_PKG_VERSION"),
        seed,
        hash
    )
}

pub fn training_log_csv(result: &TrainResult) -> String {
    let mut out = csv_stamp(result.config.seed, &config_hash(&result.config));
    out.push_str("episode,expansions,return,epsilon,loss_mean\n");
    for e in &result.log {
        writeln!(
            out,
            "{},{},{},{:.4},{:.6}",
            e.episode, e.expansions, e.ret, e.epsilon, e.loss_mean
        )
        .unwrap();
    }
    out
}

pub fn eval_csv(records: &[EvalRecord], seed: u64) -> String {
    let mut out = csv_stamp(seed, &config_hash(&records.iter().map(|r| &r.policy).collect::<Vec<_>>()));
    out.push_str("domain,n,k,policy,solved,expansions,millis,seed\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.domain, r.n, r.k, r.policy, r.solved, r.expansions, r.millis, r.seed
        )
        .unwrap();
    }
    out
}
