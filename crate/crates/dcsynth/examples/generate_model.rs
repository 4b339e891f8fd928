//! Generate a benchmark instance, print it in the textual model format, and
//! parse it back to show the round trip.

use dcsynth::benchmarks::{generate_benchmark, BenchmarkSpec, Domain};
use dcsynth::model_io::{parse_model, serialize_model};

fn main() {
    let model = generate_benchmark(BenchmarkSpec::new(Domain::TL, 2, 2));
    let text = serialize_model(&model);
    println!("{text}");

    let reparsed = parse_model(&text).expect("generated models parse");
    assert_eq!(serialize_model(&reparsed), text);
    eprintln!(
        "components: {}, labels: {}, round trip ok",
        model.components.len(),
        model.labels.len()
    );
}
