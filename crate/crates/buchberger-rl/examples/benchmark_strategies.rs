//! Benchmark all selection strategies on the same sampled binomial
//! ideals and print a mean[std] comparison table.
//!
//! ```bash
//! cargo run --release --example benchmark_strategies
//! ```

use buchberger_rl::bench::run_benchmark;
use buchberger_rl::groebner::{PairUpdateMode, SelectionStrategy};
use buchberger_rl::ideal_gen::DistributionSpec;

fn main() {
    let spec: DistributionSpec = "3-20-10 weighted".parse().unwrap();
    let samples = 500; // bump toward 10000 for table-quality numbers
    let (_, reports) = run_benchmark(
        &spec,
        &SelectionStrategy::ALL,
        samples,
        0,
        PairUpdateMode::GebauerMoller,
    )
    .unwrap();

    println!("{spec}, {samples} samples, identical ideals per strategy");
    println!("{:>12} {:>12} {:>10} {:>8}", "strategy", "mean", "std", "p90");
    for r in &reports {
        println!(
            "{:>12} {:>12.1} {:>10.1} {:>8}",
            r.strategy, r.mean_additions, r.std_additions, r.percentiles["p90"]
        );
    }
}
