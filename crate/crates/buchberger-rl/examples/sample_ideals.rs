//! Draw random binomial ideals from the weighted and uniform
//! distributions (plus the Poisson-extended non-binomial model) and
//! write one to the JSON ideal-file format the `gb` subcommand reads.
//!
//! ```bash
//! cargo run --example sample_ideals
//! ```

use buchberger_rl::ideal_gen::{sample_ideal, DistributionSpec, IdealFile};

fn main() {
    for spec_text in ["3-20-10 weighted", "3-20-10 uniform"] {
        let spec: DistributionSpec = spec_text.parse().unwrap();
        let sample = sample_ideal(&spec, 0);
        println!("{spec}, seed 0:");
        for g in &sample.generators {
            println!("  {g}");
        }
    }

    // non-binomial: Poisson(0.5) extra terms appended to each binomial
    let spec = DistributionSpec::new(3, 20, 10, buchberger_rl::ideal_gen::Flavor::Weighted)
        .unwrap()
        .with_lambda(0.5)
        .unwrap();
    let sample = sample_ideal(&spec, 1);
    println!("{spec}, seed 1:");
    for g in &sample.generators {
        println!("  {g}");
    }

    let file = IdealFile::from_sample(&sample);
    let path = std::env::temp_dir().join("buchberger-rl-example-ideal.json");
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    println!("ideal file written to {}", path.display());
}
