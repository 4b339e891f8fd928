//! Train briefly, then pick the per-episode weight snapshot that generalizes
//! best to larger instances of the same family.

use dcsynth::benchmarks::Domain;
use dcsynth::train::{select_snapshot, train, Algo, TrainConfig};

fn main() {
    let mut config = TrainConfig::new(Algo::Rl, Domain::TL, 11);
    config.episodes = 10;
    config.epsilon_decay_steps = 200;

    let result = train(&config);
    let report = select_snapshot(&result, &[(3, 3), (4, 4)], 500);
    println!(
        "picked episode {} ({}/{} instances solved, {} expansions total)",
        report.episode,
        report.solved,
        report.instances.len(),
        report.expansions
    );
}
