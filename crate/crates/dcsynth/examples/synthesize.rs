//! Run on-the-fly synthesis on AT(2,2) under the RA heuristic and print the
//! verdict plus the extracted director.

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::engine::run_dcs;
use dcsynth::policy::PolicySpec;

fn main() {
    let model = generate_benchmark(BenchmarkSpec::new(Domain::AT, 2, 2));
    let mut policy = PolicySpec::Ra.build(&model).unwrap();
    let verdict = run_dcs(&model, policy.as_mut(), 5000, 0);

    println!(
        "realizable: {}, decided: {}, expansions: {}",
        verdict.realizable, verdict.decided, verdict.expansions
    );
    if let Some(director) = verdict.director {
        println!("director covers {} winning states:", director.choices.len());
        for (state, choice) in director.choices.iter().take(5) {
            match choice {
                Some(label) => println!("  {state:?} -> enable {}", model.label(*label)),
                None => println!("  {state:?} -> only uncontrollable events"),
            }
        }
    }
}
