//! Versioned JSON model files: a header identifying the variable count,
//! observation mode and layer shapes, plus the full weights and
//! optimizer state so training can resume from a checkpoint.

use crate::env::ObservationMode;
use crate::error::{Error, Result};
use crate::learn::policy::PolicyParams;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub n: usize,
    pub observation_mode: ObservationMode,
    pub hidden: usize,
    pub width: usize,
    pub params: PolicyParams,
}

impl ModelFile {
    pub fn new(n: usize, mode: ObservationMode, params: PolicyParams) -> Self {
        Self {
            format_version: MODEL_FORMAT_VERSION,
            n,
            observation_mode: mode,
            hidden: params.hidden,
            width: params.width,
            params,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported format version {} (expected {MODEL_FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.width != self.observation_mode.width(self.n) {
            return Err(Error::ModelFormat(format!(
                "header width {} does not match n={} in {} mode",
                self.width, self.n, self.observation_mode
            )));
        }
        if self.params.width != self.width || self.params.hidden != self.hidden {
            return Err(Error::ModelFormat(
                "weight shapes disagree with the header".into(),
            ));
        }
        if self.params.w1.len() != self.hidden * self.width
            || self.params.b1.len() != self.hidden
            || self.params.w2.len() != self.hidden
        {
            return Err(Error::ModelFormat("weight array lengths are wrong".into()));
        }
        let finite = self.params.w1.iter().all(|x| x.is_finite())
            && self.params.b1.iter().all(|x| x.is_finite())
            && self.params.w2.iter().all(|x| x.is_finite())
            && self.params.b2.is_finite();
        if !finite {
            return Err(Error::ModelFormat("non-finite weights".into()));
        }
        Ok(())
    }

    /// The weights, checked against the environment they will drive.
    pub fn params_for(&self, n: usize, mode: ObservationMode) -> Result<PolicyParams> {
        if self.n != n || self.observation_mode != mode {
            return Err(Error::ModelFormat(format!(
                "model was trained for n={} in {} mode, requested n={n} in {mode} mode",
                self.n, self.observation_mode
            )));
        }
        Ok(self.params.clone())
    }
}

pub fn save_model(path: &Path, model: &ModelFile) -> Result<()> {
    model.validate()?;
    let json = serde_json::to_string_pretty(model)?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)?;
    let model: ModelFile =
        serde_json::from_str(&text).map_err(|e| Error::ModelFormat(e.to_string()))?;
    model.validate()?;
    Ok(model)
}
