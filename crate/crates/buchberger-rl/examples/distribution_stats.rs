//! Explore the random binomial ideal distributions: dimension
//! histograms and a degree/generator-count difficulty grid under the
//! Degree strategy.
//!
//! ```bash
//! cargo run --release --example distribution_stats
//! ```

use buchberger_rl::bench::{difficulty_grid, dimension_stats};
use buchberger_rl::ideal_gen::DistributionSpec;

fn main() {
    let samples = 500;
    for spec_text in ["3-20-10 weighted", "3-20-4 uniform"] {
        let spec: DistributionSpec = spec_text.parse().unwrap();
        let stats = dimension_stats(&spec, samples, 0).unwrap();
        println!("{spec}: dimension histogram over {samples} samples");
        for (dim, count) in &stats.dimension_counts {
            println!("  dim {dim:>2}: {count}");
        }
    }

    let base: DistributionSpec = "3-20-10 weighted".parse().unwrap();
    let cells = difficulty_grid(&base, &[5, 10, 20], &[4, 10], 200, 0).unwrap();
    println!("\nmean additions under Degree selection (n=3 weighted):");
    println!("{:>4} {:>4} {:>10}", "d", "s", "mean");
    for c in &cells {
        println!("{:>4} {:>4} {:>10.1}", c.d, c.s, c.mean_additions);
    }
}
