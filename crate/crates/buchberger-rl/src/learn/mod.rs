//! The learned selection policy: a per-row preference network with
//! softmax over the pair matrix, rollout value functions, GAE
//! advantages, and clipped-surrogate PPO training with Adam.

mod gae;
mod model_io;
mod policy;
mod trainer;

pub use gae::gae;
pub use model_io::{load_model, save_model, ModelFile, MODEL_FORMAT_VERSION};
pub use policy::{clipped_surrogate, clipped_surrogate_grad, ForwardPass, PolicyGrad, PolicyParams, StepSample};
pub use trainer::{
    evaluate, value_estimate, EpochReport, EvalReport, Trainer, TrainerConfig, Trajectory, ValueKind,
};
