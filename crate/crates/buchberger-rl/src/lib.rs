//! Gröbner basis computation over a prime finite field with pluggable
//! S-pair selection strategies, a Markov-decision-process view of
//! Buchberger's algorithm, and a policy-gradient trainer that learns
//! selection policies for random binomial ideals.
//!
//! The main entry points are:
//!
//! * [`groebner::buchberger`] — run Buchberger's algorithm with a
//!   [`groebner::SelectionStrategy`] and collect run statistics.
//! * [`env::BuchbergerEnv`] — episodic environment where an action picks
//!   the next S-pair and the reward is minus the number of polynomial
//!   additions performed.
//! * [`learn::Trainer`] — PPO + GAE training of a per-row preference
//!   network over the pair matrix.
//! * [`bench`] — seeded benchmark harness behind the CLI subcommands.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod algebra;
pub mod bench;
pub mod cli;
pub mod env;
pub mod error;
pub mod groebner;
pub mod ideal_gen;
pub mod learn;

pub use error::Error;
