//! Train a pair-selection policy with PPO for a handful of epochs and
//! watch the mean episode cost fall. Uses the cheap pairs-left value
//! function so the run finishes in seconds.
//!
//! ```bash
//! cargo run --release --example train_agent
//! ```

use buchberger_rl::learn::{Trainer, TrainerConfig, ValueKind};

fn main() {
    let mut config = TrainerConfig::new(vec!["3-10-6 weighted".parse().unwrap()]);
    config.value_kind = ValueKind::PairsLeft;
    config.episodes_per_epoch = 50;
    config.epochs = 15;
    config.seed = 7;

    let mut trainer = Trainer::new(config.clone()).unwrap();
    println!("training on {} for {} epochs", config.distributions[0], config.epochs);
    println!("{:>6} {:>12} {:>8} {:>10}", "epoch", "mean adds", "updates", "kl");
    for _ in 0..config.epochs {
        let r = trainer.train_epoch().unwrap();
        println!(
            "{:>6} {:>12.1} {:>8} {:>10.4}",
            r.epoch, r.mean_additions, r.updates, r.kl
        );
    }

    let model = trainer.model_file();
    let path = std::env::temp_dir().join("buchberger-rl-example-model.json");
    buchberger_rl::learn::save_model(&path, &model).unwrap();
    println!("model saved to {}", path.display());
}
