//! Compute the reduced minimal Groebner basis of a small ideal and show
//! how the selection strategy changes the work done (but never the
//! answer).
//!
//! ```bash
//! cargo run --example compute_basis
//! ```

use buchberger_rl::algebra::{parse_polynomial, PrimeField};
use buchberger_rl::groebner::{buchberger, PairUpdateMode, RunLimits, SelectionStrategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let field = PrimeField::default(); // F_32003
    let n = 2;
    let generators: Vec<_> = ["x0^3+x1^2", "x0^2*x1-1"]
        .iter()
        .map(|s| parse_polynomial(s, n, &field).expect("valid polynomial"))
        .collect();

    println!("ideal generators:");
    for g in &generators {
        println!("  {g}");
    }

    for strategy in SelectionStrategy::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (basis, stats) = buchberger(
            &generators,
            field,
            strategy,
            PairUpdateMode::GebauerMoller,
            &mut rng,
            RunLimits::default(),
        )
        .expect("computation succeeds");
        let printable: Vec<String> = basis.iter().map(|p| p.to_string()).collect();
        println!(
            "{:>10}: {} additions, basis {{{}}}, deg_max {}, dim {}",
            strategy.name(),
            stats.additions,
            printable.join(", "),
            stats.deg_max,
            stats.dimension
        );
    }
}
