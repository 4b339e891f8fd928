//! Train the feature-based Q-network on TL(2,2) for a handful of episodes
//! and print the training log. Full runs use 100 episodes (see the `train`
//! subcommand); this keeps the example fast.

use dcsynth::benchmarks::Domain;
use dcsynth::train::{train, training_log_csv, Algo, TrainConfig};

fn main() {
    let mut config = TrainConfig::new(Algo::Rl, Domain::TL, 7);
    config.episodes = 15;
    config.epsilon_decay_steps = 300;

    let result = train(&config);
    print!("{}", training_log_csv(&result));
    println!("# auc = {}", result.auc());
}
