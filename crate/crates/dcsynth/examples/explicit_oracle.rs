//! Cross-check the on-the-fly engine against the monolithic oracle, which
//! materializes the full product and runs the alternating fixpoint there.

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::engine::run_dcs;
use dcsynth::oracle::monolithic_oracle;
use dcsynth::policy::PolicySpec;

fn main() {
    for domain in Domain::ALL {
        let model = generate_benchmark(BenchmarkSpec::new(domain, 2, 2));
        let oracle = monolithic_oracle(&model, 1_000_000).unwrap();
        let mut policy = PolicySpec::Bfs.build(&model).unwrap();
        let verdict = run_dcs(&model, policy.as_mut(), 1_000_000, 0);
        assert_eq!(verdict.realizable, oracle.realizable, "{domain}");
        println!(
            "{domain}(2,2): realizable={}, product {} states / {} transitions, \
             on-the-fly decided after {} expansions",
            oracle.realizable, oracle.num_states, oracle.num_transitions, verdict.expansions
        );
    }
}
