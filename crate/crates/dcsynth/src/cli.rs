//! Command-line front end. Thin: parses arguments, wires the library calls,
//! and formats the JSON/CSV artifacts.
//!
//! Exit codes: 0 on success (an unrealizable or undecided verdict is still a
//! successful run), 1 on domain failures (bad model files, missing weights),
//! 2 on usage errors.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use crate::engine::run_dcs;
use crate::lts::CompositeModel;
use crate::model_io::{parse_model, serialize_model};
use crate::nn::{load_gnn, load_qnet, save_gnn, save_qnet};
use crate::oracle::monolithic_oracle;
use crate::policy::{GcrlPolicy, PolicySpec, RlPolicy};
use crate::train::{
    config_hash, eval_csv, eval_grid, train, Algo, TrainConfig, EVAL_BUDGET, SELECTION_BUDGET,
    SELECTION_INSTANCES,
};

#[derive(Parser)]
#[command(name = "dcsynth", version, about = "Directed controller synthesis with learned exploration policies")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark model and print it in the model format.
    Generate(GenerateArgs),
    /// Run on-the-fly synthesis under an exploration policy.
    Synth(SynthArgs),
    /// Train an exploration policy with DQN.
    Train(TrainArgs),
    /// Pick the best per-episode weight snapshot by generalization.
    Select(SelectArgs),
    /// Evaluate a policy over an instance grid, producing a CSV.
    EvalGrid(EvalGridArgs),
    /// Decide realizability on the fully materialized product.
    Oracle(OracleArgs),
}

/// Either a model file or a generated benchmark instance.
#[derive(Args)]
struct ModelSource {
    /// Model file in the textual format.
    #[arg(long, conflicts_with_all = ["domain", "n", "k"])]
    model: Option<PathBuf>,
    /// Benchmark family (AT, BW, DP, TA, TL).
    #[arg(long, required_unless_present = "model")]
    domain: Option<Domain>,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
}

#[derive(Serialize)]
#[serde(untagged)]
enum InstanceDesc {
    File { model: String },
    Bench { domain: String, n: u32, k: u32 },
}

impl ModelSource {
    fn load(&self) -> anyhow::Result<(CompositeModel, InstanceDesc)> {
        if let Some(path) = &self.model {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let model = parse_model(&text)?;
            return Ok((model, InstanceDesc::File { model: path.display().to_string() }));
        }
        let domain = self.domain.expect("clap enforces model|domain");
        let model = generate_benchmark(BenchmarkSpec::new(domain, self.n, self.k));
        Ok((model, InstanceDesc::Bench { domain: domain.to_string(), n: self.n, k: self.k }))
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    domain: Domain,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    source: ModelSource,
    /// random | bfs | dfs | ra | rl:<weights> | gcrl:<weights>[:k]
    #[arg(long, default_value = "bfs")]
    policy: PolicySpec,
    #[arg(long, default_value_t = EVAL_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verdict JSON file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// gcrl | rl
    #[arg(long)]
    algo: Algo,
    #[arg(long)]
    domain: Domain,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 100)]
    episodes: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Final weights file.
    #[arg(short, long)]
    out: PathBuf,
    /// Training log CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Directory for per-episode weight snapshots.
    #[arg(long)]
    snapshots: Option<PathBuf>,
    /// k-hop radius of the GNN input graph.
    #[arg(long, default_value_t = 2)]
    khop: u32,
    /// Aggregation: normalized_sym | sum.
    #[arg(long, default_value = "normalized_sym")]
    aggregation: String,
}

#[derive(Args)]
struct SelectArgs {
    /// Directory of per-episode snapshot weight files.
    #[arg(long)]
    snapshots: PathBuf,
    #[arg(long)]
    domain: Domain,
    #[arg(long, default_value_t = SELECTION_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    khop: u32,
    /// Where to copy the winning weights.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalGridArgs {
    #[arg(long)]
    domain: Domain,
    #[arg(long, default_value_t = 15)]
    max_n: u32,
    #[arg(long, default_value_t = 15)]
    max_k: u32,
    #[arg(long)]
    policy: PolicySpec,
    #[arg(long, default_value_t = EVAL_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Abort if the product exceeds this many states.
    #[arg(long, default_value_t = 10_000_000)]
    max_states: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct VerdictOut {
    version: &'static str,
    realizable: bool,
    decided: bool,
    expansions: u64,
    seed: u64,
    policy: String,
    budget: u64,
    instance: InstanceDesc,
}

pub fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => {
            let model = generate_benchmark(BenchmarkSpec::new(args.domain, args.n, args.k));
            let header = format!(
                "# dcsynth {} domain={} n={} k={}\n",
                env!("CARGO_PKG_VERSION"),
                args.domain,
                args.n,
                args.k
            );
            emit(&args.out, &format!("{header}{}", serialize_model(&model)))
        }
        Command::Synth(args) => {
            let (model, instance) = args.source.load()?;
            let mut policy = args.policy.build(&model)?;
            let verdict = run_dcs(&model, policy.as_mut(), args.budget, args.seed);
            let out = VerdictOut {
                version: env!("CARGO_PKG_VERSION"),
                realizable: verdict.realizable,
                decided: verdict.decided,
                expansions: verdict.expansions,
                seed: args.seed,
                policy: policy.name(),
                budget: args.budget,
                instance,
            };
            emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Train(args) => {
            let mut config = TrainConfig::new(args.algo, args.domain, args.seed);
            config.n = args.n;
            config.k = args.k;
            config.episodes = args.episodes;
            config.khop = args.khop;
            config.aggregation = match args.aggregation.as_str() {
                "normalized_sym" => crate::nn::Aggregation::NormalizedSym,
                "sum" => crate::nn::Aggregation::Sum,
                other => bail!("unknown aggregation {other:?} (normalized_sym|sum)"),
            };
            let result = train(&config);
            save_params(&result, &result.final_params, &args.out)?;
            if let Some(log) = &args.log {
                std::fs::write(log, crate::train::training_log_csv(&result))
                    .with_context(|| format!("writing {}", log.display()))?;
            }
            if let Some(dir) = &args.snapshots {
                std::fs::create_dir_all(dir)?;
                for (i, params) in result.snapshots.iter().enumerate() {
                    save_params(&result, params, &dir.join(format!("ep{i:03}.json")))?;
                }
            }
            println!(
                "trained {} on {}({},{}): {} episodes, auc {}, config {}",
                config.algo,
                config.domain,
                config.n,
                config.k,
                config.episodes,
                result.auc(),
                config_hash(&config)
            );
            Ok(())
        }
        Command::Select(args) => select_cmd(args),
        Command::EvalGrid(args) => {
            let records = eval_grid(
                args.domain,
                args.max_n,
                args.max_k,
                &args.policy,
                args.budget,
                args.seed,
            )?;
            emit(&args.out, &eval_csv(&records, args.seed))
        }
        Command::Oracle(args) => {
            let (model, instance) = args.source.load()?;
            let verdict = monolithic_oracle(&model, args.max_states)?;
            #[derive(Serialize)]
            struct OracleOut {
                version: &'static str,
                realizable: bool,
                num_states: usize,
                num_transitions: usize,
                instance: InstanceDesc,
            }
            let out = OracleOut {
                version: env!("CARGO_PKG_VERSION"),
                realizable: verdict.realizable,
                num_states: verdict.num_states,
                num_transitions: verdict.num_transitions,
                instance,
            };
            emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
    }
}

fn save_params(
    result: &crate::train::TrainResult,
    params: &[f64],
    path: &Path,
) -> anyhow::Result<()> {
    match result.config.algo {
        Algo::Gcrl => save_gnn(&result.gnn_from_params(params), path)?,
        Algo::Rl => save_qnet(&result.qnet_from_params(params), path)?,
    }
    Ok(())
}

fn select_cmd(args: SelectArgs) -> anyhow::Result<()> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&args.snapshots)
        .with_context(|| format!("reading {}", args.snapshots.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no snapshot weight files in {}", args.snapshots.display());
    }
    let models: Vec<_> = SELECTION_INSTANCES
        .iter()
        .map(|&(n, k)| generate_benchmark(BenchmarkSpec::new(args.domain, n, k)))
        .collect();
    let mut best: Option<(u32, u64, usize)> = None;
    for (i, path) in paths.iter().enumerate() {
        let mut solved = 0u32;
        let mut expansions = 0u64;
        for model in &models {
            let verdict = if let Ok(gnn) = load_gnn(path) {
                let mut p = GcrlPolicy::new(gnn, model, args.khop)?;
                run_dcs(model, &mut p, args.budget, args.seed)
            } else {
                let qnet = load_qnet(path)
                    .with_context(|| format!("loading {}", path.display()))?;
                let mut p = RlPolicy::new(qnet, model)?;
                run_dcs(model, &mut p, args.budget, args.seed)
            };
            if verdict.decided {
                solved += 1;
            }
            expansions += verdict.expansions;
        }
        let better = match best {
            None => true,
            Some((s, e, idx)) => {
                (solved, std::cmp::Reverse(expansions), i) > (s, std::cmp::Reverse(e), idx)
            }
        };
        if better {
            best = Some((solved, expansions, i));
        }
    }
    let (solved, expansions, idx) = best.unwrap();
    std::fs::copy(&paths[idx], &args.out)
        .with_context(|| format!("copying {} to {}", paths[idx].display(), args.out.display()))?;
    #[derive(Serialize)]
    struct SelectOut {
        version: &'static str,
        chosen: String,
        solved: u32,
        expansions: u64,
        instances: Vec<(u32, u32)>,
        budget: u64,
        seed: u64,
    }
    let report = SelectOut {
        version: env!("CARGO_PKG_VERSION"),
        chosen: paths[idx].display().to_string(),
        solved,
        expansions,
        instances: SELECTION_INSTANCES.to_vec(),
        budget: args.budget,
        seed: args.seed,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
