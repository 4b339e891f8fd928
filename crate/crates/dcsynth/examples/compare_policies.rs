//! Run every fixed exploration policy on the same instance and compare how
//! many expansions each needs to decide it.

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::engine::run_dcs;
use dcsynth::policy::PolicySpec;

fn main() {
    let model = generate_benchmark(BenchmarkSpec::new(Domain::BW, 2, 2));
    println!("BW(2,2), budget 5000, seed 0");
    for spec in ["random", "bfs", "dfs", "ra"] {
        let spec: PolicySpec = spec.parse().unwrap();
        let mut policy = spec.build(&model).unwrap();
        let verdict = run_dcs(&model, policy.as_mut(), 5000, 0);
        println!(
            "  {:<6} decided={} expansions={}",
            policy.name(),
            verdict.decided,
            verdict.expansions
        );
    }
}
