//! Evaluate a fixed policy over a small (n, k) grid and print the CSV that
//! the `eval-grid` subcommand would write. Instances are attempted in
//! nondecreasing n+k order, gated on their smaller neighbors being solved.

use dcsynth::benchmarks::Domain;
use dcsynth::policy::PolicySpec;
use dcsynth::train::{eval_csv, eval_grid};

fn main() {
    let records = eval_grid(Domain::DP, 4, 3, &PolicySpec::Ra, 5000, 0).unwrap();
    print!("{}", eval_csv(&records, 0));

    let solved = records.iter().filter(|r| r.solved).count();
    eprintln!("solved {solved}/{} attempted instances", records.len());
}
