//! Step through one episode of the pair-selection environment by hand:
//! the observation is the pair exponent matrix, an action picks a row,
//! and the reward is minus the polynomial additions that pair cost.
//!
//! ```bash
//! cargo run --example mdp_episode
//! ```

use buchberger_rl::env::{BuchbergerEnv, ObservationMode};
use buchberger_rl::ideal_gen::DistributionSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let spec: DistributionSpec = "3-10-6 weighted".parse().unwrap();
    let mut env = BuchbergerEnv::new(ObservationMode::Full);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut obs = env.reset_sampled(&spec, &mut rng);

    println!("initial pair matrix ({} rows x {} cols):", obs.rows(), 4 * 3);
    for (row, pair) in obs.matrix.iter().zip(&obs.pair_index_map) {
        println!("  pair {pair:?}: {row:?}");
    }

    let mut total_reward = 0i64;
    let mut step = 0;
    while !env.is_done() {
        // trivial fixed policy: always take the first row
        let result = env.step(0).expect("row 0 exists while pairs remain");
        total_reward += result.reward;
        step += 1;
        println!(
            "step {step}: pair {:?} cost {} additions, {} pairs left, basis size {}",
            result.info.pair,
            result.info.additions,
            result.observation.rows(),
            result.info.basis_size
        );
        obs = result.observation;
    }
    drop(obs);

    let stats = env.stats();
    println!(
        "episode over: total reward {total_reward}, additions {}, final basis size {}",
        stats.additions, stats.basis_size
    );
    assert_eq!(total_reward, -(stats.additions as i64));
}
