//! Acceptance gate: one test per criterion, each printing a PASS line once
//! its checks hold. Reference implementations live in `common/` and are
//! independent of the production code paths they check.

mod common;

use std::sync::OnceLock;

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::engine::{run_dcs, Class, Explorer};
use dcsynth::features::NormalizedAlphabet;
use dcsynth::graph::{build_graph, khop_subgraph, IncrementalEncoder};
use dcsynth::nn::{load_gnn, save_gnn, Aggregation, GnnModel};
use dcsynth::oracle::monolithic_oracle;
use dcsynth::policy::{GcrlPolicy, PolicySpec, RaPolicy, RandomPolicy};
use dcsynth::train::{
    eval_grid, select_snapshot_among, train, training_log_csv, Algo, EpisodeLog, TrainConfig,
    TrainResult,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(n: u32, name: &str) {
    println!("[acceptance] criterion {n} ({name}): PASS");
}

const TREND_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

/// GCRL training runs shared between the learning-trend and transfer
/// criteria; trained once.
fn trained_runs() -> &'static Vec<TrainResult> {
    static RUNS: OnceLock<Vec<TrainResult>> = OnceLock::new();
    RUNS.get_or_init(|| {
        TREND_SEEDS
            .iter()
            .map(|&seed| train(&TrainConfig::new(Algo::Gcrl, Domain::TL, seed)))
            .collect()
    })
}

#[test]
fn criterion_01_oracle_equivalence() {
    let policies = ["random", "bfs", "dfs", "ra"];
    for domain in Domain::ALL {
        for n in [1, 2] {
            for k in [1, 2] {
                let model = generate_benchmark(BenchmarkSpec::new(domain, n, k));
                let oracle = monolithic_oracle(&model, 1_000_000).unwrap();
                for p in policies {
                    for seed in [0, 1, 2] {
                        let spec: PolicySpec = p.parse().unwrap();
                        let mut policy = spec.build(&model).unwrap();
                        let v = run_dcs(&model, policy.as_mut(), 1_000_000, seed);
                        assert!(v.decided, "{domain}({n},{k}) {p} seed {seed} undecided");
                        assert_eq!(
                            v.realizable, oracle.realizable,
                            "{domain}({n},{k}) {p} seed {seed} disagrees with the oracle"
                        );
                    }
                }
            }
        }
    }
    pass(1, "on-the-fly verdicts equal the monolithic oracle");
}

#[test]
fn criterion_02_director_validity() {
    for domain in Domain::ALL {
        let model = generate_benchmark(BenchmarkSpec::new(domain, 2, 2));
        for p in ["random", "bfs", "dfs", "ra"] {
            let spec: PolicySpec = p.parse().unwrap();
            let mut policy = spec.build(&model).unwrap();
            let v = run_dcs(&model, policy.as_mut(), 1_000_000, 0);
            assert!(v.realizable, "{domain}(2,2) must be realizable");
            let director = v.director.expect("realizable verdicts carry a director");
            director.validate(&model).unwrap_or_else(|e| {
                panic!("{domain}(2,2) {p}: closed-loop validation failed: {e}")
            });
            // A director enables at most one controllable event per state,
            // with one entry per state.
            let mut states: Vec<_> = director.choices.iter().map(|(s, _)| s).collect();
            states.sort();
            states.dedup();
            assert_eq!(states.len(), director.choices.len(), "{domain} duplicate state");
            for (_, choice) in &director.choices {
                if let Some(label) = choice {
                    assert!(model.is_controllable(*label));
                }
            }
        }
    }
    pass(2, "extracted directors are valid in the closed loop");
}

#[test]
fn criterion_03_gnn_forward_and_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for fixture in 0..50 {
        let agg = if fixture % 2 == 0 { Aggregation::NormalizedSym } else { Aggregation::Sum };
        let (f_n, h, f_e, h_m) = (3, 4, 2, 5);
        let model = GnnModel::new(f_n, h, f_e, h_m, agg, &mut rng);
        let g = common::random_connected_graph(&mut rng, f_n, f_e);
        // Forward pass against the dense reference.
        let fast = model.scores(&g);
        let slow = common::dense_gnn_scores(&model, &g);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-9, "fixture {fixture}: {a} vs {b}");
        }
        // Gradients against central finite differences.
        let weights: Vec<f64> = (0..g.frontier.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, cache) = model.forward(&g);
        let analytic = model.backward(&cache, &weights);
        let mut flat = model.flatten();
        let mut probe = model.clone();
        let eps = 1e-6;
        for i in 0..flat.len() {
            let orig = flat[i];
            flat[i] = orig + eps;
            probe.assign_from_flat(&flat);
            let up: f64 = probe.scores(&g).iter().zip(&weights).map(|(s, w)| s * w).sum();
            flat[i] = orig - eps;
            probe.assign_from_flat(&flat);
            let down: f64 = probe.scores(&g).iter().zip(&weights).map(|(s, w)| s * w).sum();
            flat[i] = orig;
            let fd = (up - down) / (2.0 * eps);
            let denom = fd.abs().max(analytic[i].abs()).max(1e-6);
            if (fd - analytic[i]).abs() / denom < 1e-4 {
                continue;
            }
            // Central differences are invalid across a ReLU kink. When the
            // two one-sided slopes disagree, the analytic gradient only has
            // to lie between them (it is a subgradient at the kink).
            let mid: f64 = model.scores(&g).iter().zip(&weights).map(|(s, w)| s * w).sum();
            let d_up = (up - mid) / eps;
            let d_down = (mid - down) / eps;
            let (lo, hi) = if d_up < d_down { (d_up, d_down) } else { (d_down, d_up) };
            let kink = (d_up - d_down).abs() / denom > 1e-4;
            assert!(
                kink && analytic[i] >= lo - 1e-4 * denom && analytic[i] <= hi + 1e-4 * denom,
                "fixture {fixture} param {i}: fd {fd} vs analytic {}",
                analytic[i]
            );
        }
    }
    pass(3, "GNN forward matches the dense reference and gradients match finite differences");
}

#[test]
fn criterion_04_khop_extraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..100 {
        let g = common::random_connected_graph(&mut rng, 2, 2);
        let n = g.node_count();
        // k at least the node count dominates any diameter: identity.
        let seed = rng.gen_range(0..n as u32);
        let (sub, map) = khop_subgraph(&g, &[seed], n as u32);
        assert_eq!(map, (0..n as u32).collect::<Vec<_>>(), "case {case}");
        assert_eq!(sub, g, "case {case}: k >= diameter must be the identity");
        // k = 2 against the naive BFS reference.
        let seeds = g.frontier_endpoints();
        let (sub, map) = khop_subgraph(&g, &seeds, 2);
        assert_eq!(map, common::bfs_khop_nodes(&g, &seeds, 2), "case {case}");
        // Frontier edges survive with features intact.
        assert_eq!(sub.frontier.len(), g.frontier.len());
        for (&new_pos, &old_pos) in sub.frontier.iter().zip(&g.frontier) {
            assert_eq!(sub.edge_feats[new_pos], g.edge_feats[old_pos]);
            let (u, v) = sub.edges[new_pos];
            let (ou, ov) = g.edges[old_pos];
            assert_eq!(sub.node_plant[u as usize], g.node_plant[ou as usize]);
            assert_eq!(sub.node_plant[v as usize], g.node_plant[ov as usize]);
        }
    }
    pass(4, "k-hop subgraph extraction is exact");
}

#[test]
fn criterion_05_graph_encoding_fidelity() {
    for (domain, steps, seed) in [(Domain::AT, usize::MAX, 0), (Domain::DP, 20, 5)] {
        let spec = if domain == Domain::AT {
            BenchmarkSpec::new(domain, 1, 1)
        } else {
            BenchmarkSpec::new(domain, 2, 2)
        };
        let model = generate_benchmark(spec);
        let alphabet = NormalizedAlphabet::from_model(&model);
        let mut ex = Explorer::new(&model);
        let mut inc = IncrementalEncoder::new(&ex);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut step = 0;
        loop {
            let g = build_graph(&ex, &alphabet);
            // History edges first, in expansion order; then the frontier in
            // canonical order, tracked by the frontier index list.
            let h = ex.history().len();
            assert_eq!(g.edge_count(), h + ex.frontier_len());
            assert_eq!(g.frontier, (h..g.edge_count()).collect::<Vec<usize>>());
            for (i, &tid) in ex.history().iter().enumerate() {
                let t = ex.trans(tid);
                assert_eq!(g.node_plant[g.edges[i].0 as usize], t.source);
                assert_eq!(g.node_plant[g.edges[i].1 as usize], t.target);
            }
            for (&pos, tid) in g.frontier.iter().zip(ex.frontier_canonical()) {
                let t = ex.trans(tid);
                assert_eq!(g.node_plant[g.edges[pos].0 as usize], t.source);
                assert_eq!(g.node_plant[g.edges[pos].1 as usize], t.target);
            }
            // Discovered nodes are numbered by discovery rank; placeholders
            // are deduplicated by plant state, one node each.
            for (id, &state) in g.node_plant.iter().enumerate() {
                match ex.discovery_rank(state) {
                    Some(r) => assert_eq!(r as usize, id),
                    None => assert!(id >= ex.discovery_order().len()),
                }
            }
            let mut plants = g.node_plant.clone();
            plants.sort_unstable();
            plants.dedup();
            assert_eq!(plants.len(), g.node_count(), "placeholders must be deduplicated");
            // The event-driven encoder agrees with the scratch rebuild.
            assert_eq!(inc.snapshot(&ex, &alphabet), g);

            if ex.frontier_len() == 0 || step >= steps {
                break;
            }
            let frontier = ex.frontier_canonical();
            let tid = frontier[rng.gen_range(0..frontier.len())];
            let event = ex.expand(tid).unwrap();
            inc.on_expand(&event);
            step += 1;
        }
    }
    pass(5, "graph encodings match the construction rules at every step");
}

#[test]
fn criterion_06_reward_and_metric_contracts() {
    // A synthetic run of 100 episodes at 10 expansions each sums to -1000.
    let synthetic: Vec<EpisodeLog> = (0..100)
        .map(|episode| EpisodeLog {
            episode,
            expansions: 10,
            ret: -10.0,
            epsilon: 0.01,
            loss_mean: 0.0,
        })
        .collect();
    let auc: f64 = synthetic.iter().map(|e| e.ret).sum();
    assert_eq!(auc, -1000.0);
    // Real training runs: return is the negative expansion count, epsilon
    // starts at 1.0 and anneals down to 0.01 within the run.
    let result = &trained_runs()[0];
    assert_eq!(result.config.epsilon_at(0), 1.0);
    for e in &result.log {
        assert_eq!(e.ret, -(e.expansions as f64));
    }
    assert!(result.log[0].epsilon > 0.9);
    let last = result.log.last().unwrap();
    assert!((last.epsilon - 0.01).abs() < 1e-9, "epsilon end: {}", last.epsilon);
    assert_eq!(result.auc(), result.log.iter().map(|e| e.ret).sum::<f64>());
    pass(6, "reward, return, AUC, and epsilon schedule meet their contracts");
}

#[test]
fn criterion_07_ra_comparator() {
    // Independent recomputation: per-component forward BFS distances to
    // marked states, abstraction distance = worst component, key =
    // (controllable, unreachable, distance).
    let mut checked = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    'outer: for round in 0.. {
        for domain in Domain::ALL {
            let (n, k) = [(2, 2), (3, 2), (2, 3)][round % 3];
            let model = generate_benchmark(BenchmarkSpec::new(domain, n, k));
            let reference_dists: Vec<Vec<u32>> = model
                .components
                .iter()
                .map(|a| {
                    (0..a.num_states())
                        .map(|start| {
                            // BFS from `start` to any marked state.
                            let mut dist = vec![u32::MAX; a.num_states()];
                            let mut queue = std::collections::VecDeque::from([start]);
                            dist[start] = 0;
                            while let Some(s) = queue.pop_front() {
                                if a.marked[s] {
                                    return dist[s];
                                }
                                for &(_, t) in &a.transitions[s] {
                                    if dist[t as usize] == u32::MAX {
                                        dist[t as usize] = dist[s] + 1;
                                        queue.push_back(t as usize);
                                    }
                                }
                            }
                            u32::MAX
                        })
                        .collect()
                })
                .collect();
            let key = |ex: &Explorer, tid| {
                let t = ex.trans(tid);
                let d = ex
                    .local_state(t.target)
                    .iter()
                    .enumerate()
                    .map(|(c, &s)| reference_dists[c][s as usize])
                    .max()
                    .unwrap();
                (t.controllable, d == u32::MAX, d)
            };
            let mut ra = RaPolicy::new(&model);
            let mut ex = Explorer::new(&model);
            while ex.class(ex.initial()) == Class::Undecided && ex.frontier_len() > 0 {
                let frontier = ex.frontier_canonical();
                let picked = {
                    use dcsynth::engine::ExplorationPolicy;
                    ra.select(&ex, &mut rng)
                };
                let best = *frontier.iter().min_by_key(|&&t| key(&ex, t)).unwrap();
                assert_eq!(key(&ex, picked), key(&ex, best), "{domain}({n},{k})");
                // Canonical tie-break: first frontier member with that key.
                let first = frontier
                    .iter()
                    .copied()
                    .find(|&t| key(&ex, t) == key(&ex, picked))
                    .unwrap();
                assert_eq!(picked, first, "{domain}({n},{k}) tie-break");
                checked += 1;
                // Diversify the visited frontiers: follow RA mostly, random otherwise.
                let next = if rng.gen_bool(0.3) {
                    frontier[rng.gen_range(0..frontier.len())]
                } else {
                    picked
                };
                ex.expand(next).unwrap();
                if checked >= 1000 {
                    break 'outer;
                }
            }
        }
    }
    assert!(checked >= 1000, "only {checked} frontier decisions checked");
    pass(7, "RA selection agrees with the exhaustive comparator on 1000 frontiers");
}

#[test]
fn criterion_08_learning_trend() {
    let median = |xs: &mut [u64]| {
        xs.sort_unstable();
        xs[xs.len() / 2]
    };
    let mut improved = 0;
    for result in trained_runs() {
        let expansions: Vec<u64> = result.log.iter().map(|e| e.expansions).collect();
        let mut first: Vec<u64> = expansions[..10].to_vec();
        let mut last: Vec<u64> = expansions[expansions.len() - 10..].to_vec();
        if median(&mut last) < median(&mut first) {
            improved += 1;
        }
    }
    assert!(improved >= 4, "only {improved}/5 seeds improved");
    pass(8, "training shrinks episodes on TL(2,2) in at least 4 of 5 seeds");
}

#[test]
fn criterion_09_transfer_beats_random() {
    let mut wins = 0;
    for result in trained_runs() {
        let seed = result.config.seed;
        // Pick a snapshot by generalization, as the full pipeline does;
        // every 5th snapshot keeps the selection affordable here.
        let candidates: Vec<usize> = (0..result.snapshots.len()).step_by(5).collect();
        let report = select_snapshot_among(
            result,
            &candidates,
            &[(3, 3), (4, 4), (5, 5)],
            1000,
        );
        let gnn = result.gnn_from_params(&result.snapshots[report.episode as usize]);
        let mut gcrl_solved = 0;
        let mut random_solved = 0;
        for n in 1..=6u32 {
            for k in 1..=6u32 {
                let model = generate_benchmark(BenchmarkSpec::new(Domain::TL, n, k));
                let mut policy =
                    GcrlPolicy::new(gnn.clone(), &model, result.config.khop).unwrap();
                if run_dcs(&model, &mut policy, 1000, seed).decided {
                    gcrl_solved += 1;
                }
                if run_dcs(&model, &mut RandomPolicy, 1000, seed).decided {
                    random_solved += 1;
                }
            }
        }
        if gcrl_solved >= random_solved {
            wins += 1;
        }
    }
    assert!(wins >= 4, "GCRL matched random on only {wins}/5 seeds");
    pass(9, "trained GNN transfers to the TL grid at least as well as random");
}

/// Maintenance hook: `cargo test --test acceptance -- --ignored` rewrites the
/// golden files after an intentional format change.
#[test]
#[ignore]
fn regenerate_goldens() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/goldens");
    std::fs::create_dir_all(&dir).unwrap();
    let model = generate_benchmark(BenchmarkSpec::new(Domain::TL, 2, 2));
    std::fs::write(dir.join("tl_2_2.lts"), dcsynth::model_io::serialize_model(&model)).unwrap();
    let mut config = TrainConfig::new(Algo::Rl, Domain::TL, 3);
    config.episodes = 5;
    config.hidden = 4;
    config.mlp_hidden = 8;
    config.epsilon_decay_steps = 50;
    std::fs::write(dir.join("train_log_rl_tiny.csv"), training_log_csv(&train(&config))).unwrap();
}

#[test]
fn criterion_10_format_goldens() {
    // Model text, byte for byte.
    let model = generate_benchmark(BenchmarkSpec::new(Domain::TL, 2, 2));
    let golden = include_str!("goldens/tl_2_2.lts");
    assert_eq!(dcsynth::model_io::serialize_model(&model), golden);
    // Training log CSV, byte for byte, from a pinned tiny run.
    let mut config = TrainConfig::new(Algo::Rl, Domain::TL, 3);
    config.episodes = 5;
    config.hidden = 4;
    config.mlp_hidden = 8;
    config.epsilon_decay_steps = 50;
    let result = train(&config);
    let golden = include_str!("goldens/train_log_rl_tiny.csv");
    assert_eq!(training_log_csv(&result), golden);
    // Eval CSV header contract.
    let records = eval_grid(Domain::TL, 1, 1, &PolicySpec::Bfs, 100, 0).unwrap();
    let csv = dcsynth::train::eval_csv(&records, 0);
    assert_eq!(csv.lines().nth(1).unwrap(), "domain,n,k,policy,solved,expansions,millis,seed");
    // Weight files reload to the same bytes.
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let gnn = GnnModel::new(3, 4, 2, 5, Aggregation::NormalizedSym, &mut rng);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    save_gnn(&gnn, &a).unwrap();
    save_gnn(&load_gnn(&a).unwrap(), &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    pass(10, "output formats match their goldens and contracts");
}
