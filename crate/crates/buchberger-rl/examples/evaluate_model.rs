//! Evaluate a policy against the classical benchmark strategies on
//! identical fresh ideals. Trains a quick model first so the example is
//! self-contained.
//!
//! ```bash
//! cargo run --release --example evaluate_model
//! ```

use buchberger_rl::bench::run_benchmark;
use buchberger_rl::groebner::{PairUpdateMode, SelectionStrategy};
use buchberger_rl::ideal_gen::DistributionSpec;
use buchberger_rl::learn::{evaluate, Trainer, TrainerConfig, ValueKind};

fn main() {
    let spec: DistributionSpec = "3-10-6 weighted".parse().unwrap();
    let mut config = TrainerConfig::new(vec![spec.clone()]);
    config.value_kind = ValueKind::PairsLeft;
    config.episodes_per_epoch = 50;
    config.seed = 3;

    let mut trainer = Trainer::new(config.clone()).unwrap();
    for _ in 0..20 {
        trainer.train_epoch().unwrap();
    }

    let episodes = 300;
    let eval_seed = 10_000; // fresh ideals, disjoint from training seeds
    let report = evaluate(
        trainer.params(),
        &spec,
        config.observation_mode,
        episodes,
        eval_seed,
        true, // sample from the softmax, as during training
        config.max_episode_length,
    )
    .unwrap();

    let (_, baselines) = run_benchmark(
        &spec,
        &SelectionStrategy::ALL,
        episodes,
        eval_seed,
        PairUpdateMode::GebauerMoller,
    )
    .unwrap();

    println!("{spec}, {episodes} fresh ideals (same samples for every row)");
    println!("{:>12} {:>10} {:>8}", "policy", "mean", "std");
    println!(
        "{:>12} {:>10.1} {:>8.1}",
        "agent", report.mean_additions, report.std_additions
    );
    for b in &baselines {
        println!(
            "{:>12} {:>10.1} {:>8.1}",
            b.strategy, b.mean_additions, b.std_additions
        );
    }
    let best = baselines
        .iter()
        .min_by(|a, b| a.mean_additions.total_cmp(&b.mean_additions))
        .unwrap();
    println!(
        "improvement over best baseline ({}): {:.1}%",
        best.strategy,
        100.0 * (1.0 - report.mean_additions / best.mean_additions)
    );
}
