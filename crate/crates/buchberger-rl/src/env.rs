//! The Buchberger MDP: an episodic environment whose observations are
//! the pair exponent matrix, whose actions are row indices, and whose
//! rewards are minus the polynomial additions performed per step.

use crate::algebra::{Polynomial, PrimeField};
use crate::error::{Error, Result};
use crate::groebner::{BuchbergerState, PairUpdateMode, RunStats};
use crate::ideal_gen::{random_ideal, DistributionSpec};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Default step cap per episode.
pub const DEFAULT_MAX_EPISODE_LENGTH: u64 = 500;

/// What the agent sees per pair row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationMode {
    /// Both terms of both generators: width 4n.
    Full,
    /// Lead monomials only: width 2n.
    LeadOnly,
}

impl ObservationMode {
    pub fn width(&self, n: usize) -> usize {
        match self {
            ObservationMode::Full => 4 * n,
            ObservationMode::LeadOnly => 2 * n,
        }
    }
}

impl fmt::Display for ObservationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservationMode::Full => write!(f, "full"),
            ObservationMode::LeadOnly => write!(f, "lead_only"),
        }
    }
}

impl FromStr for ObservationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(ObservationMode::Full),
            "lead_only" | "leadonly" | "lead-only" => Ok(ObservationMode::LeadOnly),
            other => Err(Error::InvalidArgument(format!(
                "unknown observation mode '{other}'"
            ))),
        }
    }
}

/// Pair matrix plus the row-to-pair identity map. Rows follow SPair
/// insertion order; coefficients never appear.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub matrix: Vec<Vec<u32>>,
    pub pair_index_map: Vec<(usize, usize)>,
}

impl Observation {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }
}

/// Per-step run statistics fragment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepInfo {
    pub pair: (usize, usize),
    pub additions: u64,
    pub pairs_before: usize,
    pub basis_size: usize,
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: i64,
    pub done: bool,
    pub truncated: bool,
    pub info: StepInfo,
}

/// One JSON-lines record of an episode trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRecord {
    pub pair: [usize; 2],
    pub reward: i64,
    pub p_before: usize,
    pub basis_size: usize,
}

/// Encodes the live pair set of a state as an observation matrix. Each
/// row concatenates the exponent vectors of (up to) the first two terms
/// of G[i] and G[j], lead first; a missing second term encodes as
/// zeros, as do any terms beyond the second.
pub fn encode_observation(state: &BuchbergerState, mode: ObservationMode) -> Observation {
    let n = state.num_vars();
    let mut matrix = Vec::with_capacity(state.pairs().len());
    let mut map = Vec::with_capacity(state.pairs().len());
    for pair in state.pairs() {
        let mut row = Vec::with_capacity(mode.width(n));
        for &g_idx in &[pair.i, pair.j] {
            let g = &state.generators()[g_idx];
            let blocks = match mode {
                ObservationMode::Full => 2,
                ObservationMode::LeadOnly => 1,
            };
            for b in 0..blocks {
                match g.terms().get(b) {
                    Some(t) => row.extend_from_slice(t.monomial.exponents()),
                    None => row.extend(std::iter::repeat(0).take(n)),
                }
            }
        }
        matrix.push(row);
        map.push((pair.i, pair.j));
    }
    Observation {
        matrix,
        pair_index_map: map,
    }
}

/// Episodic wrapper around a [`BuchbergerState`]. One instance is
/// single-threaded; clone for value rollouts.
#[derive(Debug, Clone)]
pub struct BuchbergerEnv {
    state: Option<BuchbergerState>,
    mode: ObservationMode,
    max_steps: Option<u64>,
    steps: u64,
    done: bool,
    truncated: bool,
}

impl BuchbergerEnv {
    pub fn new(mode: ObservationMode) -> Self {
        Self {
            state: None,
            mode,
            max_steps: Some(DEFAULT_MAX_EPISODE_LENGTH),
            steps: 0,
            done: true,
            truncated: false,
        }
    }

    pub fn with_max_steps(mut self, cap: Option<u64>) -> Self {
        self.max_steps = cap;
        self
    }

    pub fn mode(&self) -> ObservationMode {
        self.mode
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    /// The wrapped algorithm state; panics if never reset.
    pub fn state(&self) -> &BuchbergerState {
        self.state.as_ref().expect("environment has been reset")
    }

    /// Starts an episode from an explicit generating set. An ideal
    /// whose initial pair set is already empty yields an
    /// immediately-done observation.
    pub fn reset_explicit(&mut self, generators: &[Polynomial], field: PrimeField) -> Result<Observation> {
        let state = BuchbergerState::new(field, generators, PairUpdateMode::GebauerMoller)?;
        self.done = state.is_done();
        self.truncated = false;
        self.steps = 0;
        self.state = Some(state);
        Ok(self.observation())
    }

    /// Starts an episode from the distribution, resampling until the
    /// initial pair set is non-empty.
    pub fn reset_sampled<R: Rng>(&mut self, spec: &DistributionSpec, rng: &mut R) -> Observation {
        let field = spec.field();
        loop {
            let gens = random_ideal(spec, rng);
            let state = BuchbergerState::new(field, &gens, PairUpdateMode::GebauerMoller)
                .expect("sampled generators are nonzero");
            if !state.is_done() {
                self.done = false;
                self.truncated = false;
                self.steps = 0;
                self.state = Some(state);
                return self.observation();
            }
        }
    }

    pub fn observation(&self) -> Observation {
        encode_observation(self.state(), self.mode)
    }

    /// Processes the pair at `action` (a row index of the current
    /// observation). Reward is minus the additions incurred, including
    /// the S-polynomial subtraction.
    pub fn step(&mut self, action: usize) -> Result<StepResult> {
        if self.done {
            return Err(Error::InvalidState("step on a finished episode".into()));
        }
        let state = self.state.as_mut().expect("reset before step");
        let pairs_before = state.pairs().len();
        if action >= pairs_before {
            return Err(Error::InvalidAction {
                action,
                pairs: pairs_before,
            });
        }
        let pair = (state.pairs()[action].i, state.pairs()[action].j);
        let additions = state.process_pair_at(action)?;
        self.steps += 1;
        let mut done = state.is_done();
        if !done {
            if let Some(cap) = self.max_steps {
                if self.steps >= cap {
                    done = true;
                    self.truncated = true;
                }
            }
        }
        self.done = done;
        let info = StepInfo {
            pair,
            additions,
            pairs_before,
            basis_size: state.generators().len(),
        };
        Ok(StepResult {
            observation: self.observation(),
            reward: -(additions as i64),
            done,
            truncated: self.truncated,
            info,
        })
    }

    /// Run statistics of the underlying state.
    pub fn stats(&self) -> RunStats {
        self.state().stats(self.truncated)
    }
}

impl From<&StepResult> for TraceRecord {
    fn from(r: &StepResult) -> Self {
        TraceRecord {
            pair: [r.info.pair.0, r.info.pair.1],
            reward: r.reward,
            p_before: r.info.pairs_before,
            basis_size: r.info.basis_size,
        }
    }
}
