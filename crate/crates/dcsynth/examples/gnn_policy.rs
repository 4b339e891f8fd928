//! Wire a freshly initialized GNN into the exploration loop: a short GCRL
//! training run, then greedy synthesis with the learned weights on a larger
//! instance of the same family.

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::engine::run_dcs;
use dcsynth::policy::GcrlPolicy;
use dcsynth::train::{train, Algo, TrainConfig};

fn main() {
    let mut config = TrainConfig::new(Algo::Gcrl, Domain::TL, 3);
    config.episodes = 3; // keep the example quick; real runs use 100
    config.hidden = 8;
    config.mlp_hidden = 16;

    let result = train(&config);
    for e in &result.log {
        println!("episode {}: {} expansions (eps {:.2})", e.episode, e.expansions, e.epsilon);
    }

    let larger = generate_benchmark(BenchmarkSpec::new(Domain::TL, 3, 3));
    let gnn = result.gnn_from_params(&result.final_params);
    let mut policy = GcrlPolicy::new(gnn, &larger, config.khop).unwrap();
    let verdict = run_dcs(&larger, &mut policy, 1000, 0);
    println!(
        "TL(3,3) with the trained GNN: decided={} after {} expansions",
        verdict.decided, verdict.expansions
    );
}
