//! PPO training loop: parallel on-policy episode collection over freshly
//! sampled ideals, rollout value estimates, GAE advantages, and serial
//! full-batch clipped-surrogate Adam updates with KL early stopping.

use crate::env::{BuchbergerEnv, Observation, ObservationMode};
use crate::error::{Error, Result};
use crate::groebner::{BuchbergerState, SelectionStrategy};
use crate::ideal_gen::DistributionSpec;
use crate::learn::gae::gae;
use crate::learn::model_io::ModelFile;
use crate::learn::policy::{grad_kl_prepared, PolicyGrad, PolicyParams, PreparedSample, StepSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Which baseline value function supplies GAE's `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    /// Discounted return of a Degree-strategy rollout from the state.
    DegreeRollout,
    /// `-|P|`: minus the number of pairs remaining.
    PairsLeft,
    /// `V = 0` everywhere.
    None,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ValueKind::DegreeRollout => "degree_rollout",
            ValueKind::PairsLeft => "pairs_left",
            ValueKind::None => "none",
        };
        write!(f, "{s}")
    }
}

impl FromStr for ValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "degree_rollout" | "degree-rollout" | "degreerollout" => Ok(ValueKind::DegreeRollout),
            "pairs_left" | "pairs-left" | "pairsleft" => Ok(ValueKind::PairsLeft),
            "none" => Ok(ValueKind::None),
            other => Err(Error::InvalidArgument(format!(
                "unknown value kind '{other}'"
            ))),
        }
    }
}

/// Baseline value of a state. The Degree rollout runs on a clone of the
/// state to completion and returns its discounted reward sum; a rollout
/// longer than `cap` steps is an error, never a silent truncation.
pub fn value_estimate(state: &BuchbergerState, kind: ValueKind, gamma: f64, cap: u64) -> Result<f64> {
    match kind {
        ValueKind::None => Ok(0.0),
        ValueKind::PairsLeft => Ok(-(state.pairs().len() as f64)),
        ValueKind::DegreeRollout => {
            let mut clone = state.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut value = 0.0;
            let mut discount = 1.0;
            let mut steps = 0u64;
            while !clone.is_done() {
                if steps >= cap {
                    return Err(Error::RolloutCapExceeded { cap });
                }
                let idx = clone.select_index(SelectionStrategy::Degree, &mut rng)?;
                let additions = clone.process_pair_at(idx)?;
                value -= discount * additions as f64;
                discount *= gamma;
                steps += 1;
            }
            Ok(value)
        }
    }
}

/// One collected episode: parallel per-step arrays plus the bootstrap
/// value used when the episode hit the step cap.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub observations: Vec<Vec<Vec<u32>>>,
    pub actions: Vec<usize>,
    pub log_probs: Vec<f64>,
    pub rewards: Vec<f64>,
    pub values: Vec<f64>,
    pub bootstrap: f64,
    pub truncated: bool,
    pub total_additions: u64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }
}

fn serialize_specs<S: serde::Serializer>(
    specs: &[DistributionSpec],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
    strings.serialize(ser)
}

fn deserialize_specs<'de, D: serde::Deserializer<'de>>(
    de: D,
) -> std::result::Result<Vec<DistributionSpec>, D::Error> {
    let strings = Vec::<String>::deserialize(de)?;
    strings
        .iter()
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .collect()
}

fn default_gamma() -> f64 {
    0.99
}
fn default_lambda() -> f64 {
    0.97
}
fn default_clip() -> f64 {
    0.2
}
fn default_lr() -> f64 {
    1e-4
}
fn default_episodes() -> usize {
    100
}
fn default_max_updates() -> usize {
    80
}
fn default_kl_limit() -> f64 {
    0.01
}
fn default_epochs() -> u64 {
    300
}
fn default_max_episode_length() -> u64 {
    500
}
fn default_value_kind() -> ValueKind {
    ValueKind::DegreeRollout
}
fn default_observation_mode() -> ObservationMode {
    ObservationMode::Full
}
fn default_hidden() -> usize {
    128
}
fn default_rollout_cap() -> u64 {
    100_000
}

/// All training hyperparameters. Serializes to/from the key-value
/// config files accepted by the `train` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainerConfig {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_clip")]
    pub clip_epsilon: f64,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_episodes")]
    pub episodes_per_epoch: usize,
    #[serde(default = "default_max_updates")]
    pub max_updates_per_epoch: usize,
    #[serde(default = "default_kl_limit")]
    pub kl_limit: f64,
    #[serde(default = "default_epochs")]
    pub epochs: u64,
    #[serde(default = "default_max_episode_length")]
    pub max_episode_length: u64,
    #[serde(default = "default_value_kind")]
    pub value_kind: ValueKind,
    #[serde(default = "default_observation_mode")]
    pub observation_mode: ObservationMode,
    #[serde(
        serialize_with = "serialize_specs",
        deserialize_with = "deserialize_specs"
    )]
    pub distributions: Vec<DistributionSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_hidden")]
    pub hidden: usize,
    #[serde(default = "default_rollout_cap")]
    pub rollout_cap: u64,
}

impl TrainerConfig {
    pub fn new(distributions: Vec<DistributionSpec>) -> Self {
        Self {
            gamma: default_gamma(),
            lambda: default_lambda(),
            clip_epsilon: default_clip(),
            learning_rate: default_lr(),
            episodes_per_epoch: default_episodes(),
            max_updates_per_epoch: default_max_updates(),
            kl_limit: default_kl_limit(),
            epochs: default_epochs(),
            max_episode_length: default_max_episode_length(),
            value_kind: default_value_kind(),
            observation_mode: default_observation_mode(),
            distributions,
            seed: 0,
            hidden: default_hidden(),
            rollout_cap: default_rollout_cap(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.distributions.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one training distribution is required".into(),
            ));
        }
        let n = self.distributions[0].n;
        if self.distributions.iter().any(|s| s.n != n) {
            return Err(Error::InvalidArgument(
                "all training distributions must share the variable count n".into(),
            ));
        }
        for (name, v) in [
            ("gamma", self.gamma),
            ("lambda", self.lambda),
            ("clip_epsilon", self.clip_epsilon),
            ("learning_rate", self.learning_rate),
            ("kl_limit", self.kl_limit),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.gamma > 1.0 || self.lambda > 1.0 {
            return Err(Error::InvalidArgument(
                "gamma and lambda must be at most 1".into(),
            ));
        }
        if self.episodes_per_epoch == 0 || self.hidden == 0 {
            return Err(Error::InvalidArgument(
                "episodes_per_epoch and hidden must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.distributions[0].n
    }

    pub fn observation_width(&self) -> usize {
        self.observation_mode.width(self.num_vars())
    }
}

/// One JSON line of the epoch log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpochReport {
    pub epoch: u64,
    pub mean_additions: f64,
    pub std_additions: f64,
    pub updates: usize,
    pub kl: f64,
    pub wall_seconds: f64,
}

pub struct Trainer {
    config: TrainerConfig,
    params: PolicyParams,
    epoch: u64,
}

impl Trainer {
    pub fn new(config: TrainerConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let params = PolicyParams::init(config.observation_width(), config.hidden, &mut rng);
        Ok(Self {
            config,
            params,
            epoch: 0,
        })
    }

    /// Resumes from a checkpoint; the epoch log continues at
    /// `start_epoch`.
    pub fn from_model(config: TrainerConfig, model: &ModelFile, start_epoch: u64) -> Result<Self> {
        config.validate()?;
        let params = model.params_for(config.num_vars(), config.observation_mode)?;
        if params.hidden != config.hidden {
            return Err(Error::ModelFormat(format!(
                "checkpoint hidden size {} does not match configured {}",
                params.hidden, config.hidden
            )));
        }
        Ok(Self {
            config,
            params,
            epoch: start_epoch,
        })
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    pub fn params(&self) -> &PolicyParams {
        &self.params
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn model_file(&self) -> ModelFile {
        ModelFile::new(
            self.config.num_vars(),
            self.config.observation_mode,
            self.params.clone(),
        )
    }

    /// The distribution used for a given epoch: sampled uniformly from
    /// the configured list, deterministically in the epoch index.
    fn epoch_spec(&self, epoch: u64) -> &DistributionSpec {
        if self.config.distributions.len() == 1 {
            return &self.config.distributions[0];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed.wrapping_add(epoch));
        &self.config.distributions[rng.gen_range(0..self.config.distributions.len())]
    }

    /// Runs one epoch: collect, estimate, normalize, update.
    pub fn train_epoch(&mut self) -> Result<EpochReport> {
        let start = Instant::now();
        let cfg = &self.config;
        let epoch = self.epoch;
        let spec = self.epoch_spec(epoch).clone();
        let base = cfg
            .seed
            .wrapping_add(epoch.wrapping_mul(cfg.episodes_per_epoch as u64));

        let trajectories: Vec<Trajectory> = (0..cfg.episodes_per_epoch as u64)
            .into_par_iter()
            .map(|i| {
                collect_episode(
                    &self.params,
                    &spec,
                    cfg.observation_mode,
                    cfg.max_episode_length,
                    cfg.value_kind,
                    cfg.gamma,
                    cfg.rollout_cap,
                    base.wrapping_add(i),
                )
            })
            .collect::<Result<_>>()?;

        let counts: Vec<u64> = trajectories.iter().map(|t| t.total_additions).collect();
        let (mean_additions, std_additions) = crate::bench::mean_std(&counts);

        let mut batch = Vec::new();
        let mut advantages = Vec::new();
        for t in &trajectories {
            let (adv, _) = gae(&t.rewards, &t.values, t.bootstrap, cfg.gamma, cfg.lambda);
            for (step, a) in adv.into_iter().enumerate() {
                advantages.push(a);
                batch.push(StepSample {
                    matrix: t.observations[step].clone(),
                    action: t.actions[step],
                    advantage: 0.0,
                    old_logp: t.log_probs[step],
                });
            }
        }
        normalize(&mut advantages);
        for (s, a) in batch.iter_mut().zip(&advantages) {
            s.advantage = *a;
        }
        let prepared: Vec<PreparedSample> = batch.iter().map(PreparedSample::from_step).collect();

        let mut updates = 0;
        while updates < cfg.max_updates_per_epoch {
            // the KL check and the gradient are both evaluated on the
            // current params, so one pass serves both
            let (grad, kl_now) = batch_grad_kl(&self.params, &prepared, cfg.clip_epsilon)?;
            if kl_now > cfg.kl_limit {
                break;
            }
            self.params.adam_step(&grad, cfg.learning_rate);
            updates += 1;
        }
        let kl = batch_kl(&self.params, &batch)?;

        self.epoch += 1;
        Ok(EpochReport {
            epoch,
            mean_additions,
            std_additions,
            updates,
            kl,
            wall_seconds: start.elapsed().as_secs_f64(),
        })
    }
}

/// Normalizes to mean 0 / std 1 in place (no-op on constant input).
fn normalize(values: &mut [f64]) {
    if values.len() < 2 {
        for v in values.iter_mut() {
            *v = 0.0;
        }
        return;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    if std < 1e-12 {
        for v in values.iter_mut() {
            *v -= mean;
        }
        return;
    }
    for v in values.iter_mut() {
        *v = (*v - mean) / std;
    }
}

const GRAD_CHUNK: usize = 256;

/// Full-batch surrogate gradient and KL estimate: fixed-size chunks in
/// parallel, then a sequential sum, so the result is independent of the
/// worker count.
fn batch_grad_kl(
    params: &PolicyParams,
    batch: &[PreparedSample],
    epsilon: f64,
) -> Result<(PolicyGrad, f64)> {
    let chunks: Vec<(PolicyGrad, f64)> = batch
        .par_chunks(GRAD_CHUNK)
        .map(|chunk| grad_kl_prepared(params, chunk, epsilon))
        .collect();
    let mut total = PolicyGrad::zeros(params.width, params.hidden);
    let mut kl_sum = 0.0;
    for (g, k) in &chunks {
        total.add_assign(g);
        kl_sum += k;
    }
    let scale = 1.0 / batch.len().max(1) as f64;
    total.scale(scale);
    let kl = kl_sum * scale;
    let finite = kl.is_finite()
        && total.w1.iter().all(|x| x.is_finite())
        && total.b1.iter().all(|x| x.is_finite())
        && total.w2.iter().all(|x| x.is_finite())
        && total.b2.is_finite();
    if !finite {
        return Err(Error::NonFiniteLoss(
            "surrogate gradient has non-finite entries".into(),
        ));
    }
    Ok((total, kl))
}

/// Sampled KL estimate `mean(old_logp - new_logp)` over taken actions.
fn batch_kl(params: &PolicyParams, batch: &[StepSample]) -> Result<f64> {
    if batch.is_empty() {
        return Ok(0.0);
    }
    let new_logps: Vec<f64> = batch
        .par_chunks(GRAD_CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|s| params.log_prob(&s.matrix, s.action))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let kl = batch
        .iter()
        .zip(&new_logps)
        .map(|(s, &lp)| s.old_logp - lp)
        .sum::<f64>()
        / batch.len() as f64;
    if !kl.is_finite() {
        return Err(Error::NonFiniteLoss("KL estimate is non-finite".into()));
    }
    Ok(kl)
}

fn sample_row<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if x < acc {
            return i;
        }
    }
    probs.len() - 1
}

fn argmax_row(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn collect_episode(
    params: &PolicyParams,
    spec: &DistributionSpec,
    mode: ObservationMode,
    max_episode_length: u64,
    value_kind: ValueKind,
    gamma: f64,
    rollout_cap: u64,
    seed: u64,
) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut env = BuchbergerEnv::new(mode).with_max_steps(Some(max_episode_length));
    let mut obs: Observation = env.reset_sampled(spec, &mut rng);
    let mut t = Trajectory {
        observations: vec![],
        actions: vec![],
        log_probs: vec![],
        rewards: vec![],
        values: vec![],
        bootstrap: 0.0,
        truncated: false,
        total_additions: 0,
    };
    while !env.is_done() {
        let fwd = params.forward(&obs.matrix)?;
        let action = sample_row(&fwd.probs, &mut rng);
        let value = value_estimate(env.state(), value_kind, gamma, rollout_cap)?;
        let result = env.step(action)?;
        t.observations.push(obs.matrix);
        t.actions.push(action);
        t.log_probs.push(fwd.probs[action].ln());
        t.rewards.push(result.reward as f64);
        t.values.push(value);
        t.total_additions += result.info.additions;
        obs = result.observation;
    }
    t.truncated = env.was_truncated();
    if t.truncated {
        t.bootstrap = value_estimate(env.state(), value_kind, gamma, rollout_cap)?;
    }
    Ok(t)
}

/// Evaluation summary over fresh sampled ideals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub spec: String,
    pub episodes: usize,
    pub mean_additions: f64,
    pub std_additions: f64,
    pub counts: Vec<u64>,
    pub truncated_episodes: usize,
}

/// Runs the policy on `episodes` fresh ideals with per-episode seeds
/// `seed + index` (the same ideals the benchmark harness draws for that
/// seed). `sample_actions = false` takes the argmax instead.
pub fn evaluate(
    params: &PolicyParams,
    spec: &DistributionSpec,
    mode: ObservationMode,
    episodes: u64,
    seed: u64,
    sample_actions: bool,
    max_episode_length: u64,
) -> Result<EvalReport> {
    let results: Vec<(u64, bool)> = (0..episodes)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let mut env = BuchbergerEnv::new(mode).with_max_steps(Some(max_episode_length));
            let mut obs = env.reset_sampled(spec, &mut rng);
            while !env.is_done() {
                let fwd = params.forward(&obs.matrix)?;
                let action = if sample_actions {
                    sample_row(&fwd.probs, &mut rng)
                } else {
                    argmax_row(&fwd.probs)
                };
                obs = env.step(action)?.observation;
            }
            Ok((env.stats().additions, env.was_truncated()))
        })
        .collect::<Result<_>>()?;
    let counts: Vec<u64> = results.iter().map(|&(c, _)| c).collect();
    let truncated_episodes = results.iter().filter(|&&(_, t)| t).count();
    let (mean_additions, std_additions) = crate::bench::mean_std(&counts);
    Ok(EvalReport {
        spec: spec.to_string(),
        episodes: counts.len(),
        mean_additions,
        std_additions,
        counts,
        truncated_episodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, Polynomial, PrimeField};
    use crate::groebner::PairUpdateMode;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n, &field()).unwrap()
    }

    fn paper_state() -> BuchbergerState {
        let gens = [p("x0^3+x1^2", 2), p("x0^2*x1-1", 2)];
        BuchbergerState::new(field(), &gens, PairUpdateMode::GebauerMoller).unwrap()
    }

    fn small_config() -> TrainerConfig {
        let mut cfg = TrainerConfig::new(vec!["3-5-4 weighted".parse().unwrap()]);
        cfg.episodes_per_epoch = 6;
        cfg.max_updates_per_epoch = 4;
        cfg.hidden = 16;
        cfg.seed = 11;
        cfg
    }

    #[test]
    fn value_terminal_is_zero() {
        let gens = [p("x0", 2)];
        let state = BuchbergerState::new(field(), &gens, PairUpdateMode::GebauerMoller).unwrap();
        assert!(state.is_done());
        for kind in [ValueKind::DegreeRollout, ValueKind::PairsLeft, ValueKind::None] {
            assert_eq!(value_estimate(&state, kind, 0.99, 1000).unwrap(), 0.0);
        }
    }

    #[test]
    fn pairs_left_is_minus_pair_count() {
        let state = paper_state();
        let p_count = state.pairs().len();
        assert_eq!(
            value_estimate(&state, ValueKind::PairsLeft, 0.99, 1000).unwrap(),
            -(p_count as f64)
        );
    }

    // Hand-traced Degree rollout on the worked two-variable example:
    // with pair elimination the run processes two pairs with rewards
    // -1 then -2, so V = -1 + 0.99 * (-2).
    #[test]
    fn degree_rollout_hand_trace() {
        let state = paper_state();
        let v = value_estimate(&state, ValueKind::DegreeRollout, 0.99, 1000).unwrap();
        assert!((v - (-1.0 + 0.99 * -2.0)).abs() < 1e-12);
        // undiscounted: the full run costs 3 additions
        let v1 = value_estimate(&state, ValueKind::DegreeRollout, 1.0, 1000).unwrap();
        assert_eq!(v1, -3.0);
        // the rollout leaves the original untouched
        assert_eq!(state.pairs().len(), 1);
    }

    #[test]
    fn rollout_cap_is_an_error() {
        let state = paper_state();
        assert!(matches!(
            value_estimate(&state, ValueKind::DegreeRollout, 0.99, 1),
            Err(Error::RolloutCapExceeded { cap: 1 })
        ));
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = TrainerConfig::new(vec!["3-20-10 weighted".parse().unwrap()]);
        assert_eq!(cfg.gamma, 0.99);
        assert_eq!(cfg.lambda, 0.97);
        assert_eq!(cfg.clip_epsilon, 0.2);
        assert_eq!(cfg.learning_rate, 1e-4);
        assert_eq!(cfg.episodes_per_epoch, 100);
        assert_eq!(cfg.max_updates_per_epoch, 80);
        assert_eq!(cfg.kl_limit, 0.01);
        assert_eq!(cfg.max_episode_length, 500);
        assert_eq!(cfg.value_kind, ValueKind::DegreeRollout);
        assert_eq!(cfg.hidden, 128);
        assert!(Trainer::new(TrainerConfig::new(vec![])).is_err());
        let mixed = TrainerConfig::new(vec![
            "3-20-10 weighted".parse().unwrap(),
            "4-10-5 uniform".parse().unwrap(),
        ]);
        assert!(Trainer::new(mixed).is_err()); // mismatched n
    }

    #[test]
    fn config_round_trips_through_json_and_toml() {
        let cfg = small_config();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: TrainerConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.distributions, cfg.distributions);
        assert_eq!(back.hidden, cfg.hidden);
        let toml_text = toml::to_string(&cfg).unwrap();
        let back: TrainerConfig = toml::from_str(&toml_text).unwrap();
        assert_eq!(back.distributions, cfg.distributions);
        // minimal config: only distributions, everything else defaulted
        let minimal: TrainerConfig =
            toml::from_str("distributions = [\"3-20-10 weighted\"]").unwrap();
        assert_eq!(minimal.episodes_per_epoch, 100);
        // unknown fields rejected by name
        assert!(toml::from_str::<TrainerConfig>(
            "distributions = [\"3-20-10 weighted\"]\nlearning_rat = 0.1"
        )
        .is_err());
    }

    #[test]
    fn zero_learning_rate_leaves_params_unchanged() {
        let mut cfg = small_config();
        cfg.learning_rate = 0.0;
        let mut trainer = Trainer::new(cfg).unwrap();
        let before = trainer.params().clone();
        let report = trainer.train_epoch().unwrap();
        assert_eq!(trainer.params().w1, before.w1);
        assert_eq!(trainer.params().b2, before.b2);
        assert!(report.mean_additions > 0.0);
        assert_eq!(report.epoch, 0);
        // with lr = 0 the policy never moves, so KL stays 0 and all
        // updates run
        assert_eq!(report.updates, 4);
        assert!(report.kl.abs() < 1e-12);
    }

    #[test]
    fn kl_limit_zero_stops_after_at_most_one_update() {
        let mut cfg = small_config();
        cfg.kl_limit = 0.0;
        cfg.learning_rate = 0.05; // large enough that one step moves KL off 0
        let mut trainer = Trainer::new(cfg).unwrap();
        let report = trainer.train_epoch().unwrap();
        assert!(report.updates <= 1);
    }

    #[test]
    fn epoch_is_reproducible() {
        let run = || {
            let mut trainer = Trainer::new(small_config()).unwrap();
            let r1 = trainer.train_epoch().unwrap();
            let r2 = trainer.train_epoch().unwrap();
            (
                r1.mean_additions,
                r2.mean_additions,
                r1.kl,
                r2.kl,
                trainer.params().clone(),
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        assert_eq!(a.2, b.2);
        assert_eq!(a.3, b.3);
        assert_eq!(a.4, b.4);
    }

    #[test]
    fn normalize_properties() {
        let mut v: Vec<f64> = (0..500).map(|i| (i as f64).sin() * 40.0 - 7.0).collect();
        normalize(&mut v);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let std = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64).sqrt();
        assert!(mean.abs() < 1e-10);
        assert!((std - 1.0).abs() < 1e-6);
        let mut constant = vec![3.0; 10];
        normalize(&mut constant);
        assert!(constant.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn trajectories_are_consistent() {
        let cfg = small_config();
        let params = {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            PolicyParams::init(cfg.observation_width(), cfg.hidden, &mut rng)
        };
        let t = collect_episode(
            &params,
            &cfg.distributions[0],
            cfg.observation_mode,
            cfg.max_episode_length,
            ValueKind::PairsLeft,
            cfg.gamma,
            cfg.rollout_cap,
            3,
        )
        .unwrap();
        assert!(!t.is_empty());
        assert_eq!(t.observations.len(), t.len());
        assert_eq!(t.actions.len(), t.len());
        assert_eq!(t.log_probs.len(), t.len());
        assert_eq!(t.values.len(), t.len());
        assert!(!t.truncated);
        assert_eq!(t.bootstrap, 0.0);
        // recorded log-probs are of the recorded actions
        for step in 0..t.len() {
            let lp = params.log_prob(&t.observations[step], t.actions[step]).unwrap();
            assert!((lp - t.log_probs[step]).abs() < 1e-12);
        }
        // rewards total matches additions total
        let reward_sum: f64 = t.rewards.iter().sum();
        assert_eq!(reward_sum, -(t.total_additions as f64));
        // first value is -|initial P|
        assert_eq!(t.values[0], -(t.observations[0].len() as f64));
    }

    #[test]
    fn evaluate_zero_episodes_is_empty() {
        let cfg = small_config();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let params = PolicyParams::init(cfg.observation_width(), cfg.hidden, &mut rng);
        let report = evaluate(
            &params,
            &cfg.distributions[0],
            cfg.observation_mode,
            0,
            0,
            true,
            500,
        )
        .unwrap();
        assert_eq!(report.episodes, 0);
        assert!(report.counts.is_empty());
        assert_eq!(report.mean_additions, 0.0);
    }

    #[test]
    fn evaluate_is_deterministic_and_argmax_differs() {
        let cfg = small_config();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let params = PolicyParams::init(cfg.observation_width(), cfg.hidden, &mut rng);
        let spec = &cfg.distributions[0];
        let a = evaluate(&params, spec, cfg.observation_mode, 30, 9, true, 500).unwrap();
        let b = evaluate(&params, spec, cfg.observation_mode, 30, 9, true, 500).unwrap();
        assert_eq!(a.counts, b.counts);
        let greedy = evaluate(&params, spec, cfg.observation_mode, 30, 9, false, 500).unwrap();
        assert_eq!(greedy.episodes, 30);
    }

    #[test]
    fn checkpoint_resume_continues_epochs() {
        let mut trainer = Trainer::new(small_config()).unwrap();
        trainer.train_epoch().unwrap();
        trainer.train_epoch().unwrap();
        let model = trainer.model_file();
        let resumed = Trainer::from_model(small_config(), &model, trainer.epoch()).unwrap();
        assert_eq!(resumed.epoch(), 2);
        assert_eq!(resumed.params(), trainer.params());
    }

    #[test]
    fn mixed_distributions_pick_per_epoch() {
        let mut cfg = small_config();
        cfg.distributions = vec![
            "3-5-4 weighted".parse().unwrap(),
            "3-10-4 uniform".parse().unwrap(),
        ];
        let trainer = Trainer::new(cfg).unwrap();
        let picks: Vec<String> = (0..20).map(|e| trainer.epoch_spec(e).to_string()).collect();
        assert!(picks.iter().any(|s| s.contains("3-5-4")));
        assert!(picks.iter().any(|s| s.contains("3-10-4")));
    }
}
