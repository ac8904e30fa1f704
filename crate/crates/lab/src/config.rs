//! Experiment configuration and seed derivation.

use std::path::{Path, PathBuf};

use rwre_core::environment::presets;
use rwre_core::rng::{derive_seed, tag};
use rwre_core::walk::MAX_HORIZON;
use rwre_core::{check_unit, EnvironmentModel, EnvironmentView, Variant};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// The model block of a config file:
/// `{ "dimension", "kappa", "variant", "env_seed" }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub dimension: usize,
    pub kappa: f64,
    pub variant: Variant,
    /// Environment seed used when every replica shares one environment.
    #[serde(default)]
    pub env_seed: u64,
}

impl ModelSpec {
    pub fn from_model(model: &EnvironmentModel, env_seed: u64) -> Self {
        Self { dimension: model.dimension, kappa: model.kappa, variant: model.variant.clone(), env_seed }
    }

    pub fn preset(name: &str) -> Result<Self> {
        let model = presets::by_name(name).ok_or_else(|| {
            LabError::config(format!("unknown preset {name:?} (known: {})", presets::NAMES.join(", ")))
        })?;
        Ok(Self::from_model(&model, 0))
    }

    pub fn model(&self) -> Result<EnvironmentModel> {
        Ok(EnvironmentModel::new(self.dimension, self.kappa, self.variant.clone())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointRange {
    pub min_exp: u32,
    pub max_exp: u32,
}

impl Default for CheckpointRange {
    fn default() -> Self {
        Self { min_exp: 10, max_exp: 20 }
    }
}

fn default_replicas() -> usize {
    1
}
fn default_guard() -> usize {
    1000
}
fn default_gamma() -> f64 {
    0.5
}
fn default_c() -> f64 {
    0.1
}
fn default_resamples() -> usize {
    200
}
fn default_true() -> bool {
    true
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("rwre-out")
}
fn default_lyapunov_epsilon() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    /// Direction of ballisticity; regenerations are measured along it.
    pub ell: Vec<f64>,
    /// Directions for the constants and the LIL curves. Defaults to `[ell]`.
    #[serde(default)]
    pub u_list: Vec<Vec<f64>>,
    pub horizon: usize,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default = "default_guard")]
    pub guard: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub checkpoints: CheckpointRange,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Reuse `model.env_seed` for every replica (quenched study).
    #[serde(default)]
    pub fixed_env: bool,
    /// Worker threads; `None` lets rayon decide.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_resamples")]
    pub bootstrap_resamples: usize,
    /// Keep every block in memory. Needed for the bootstrap, tail and
    /// independence diagnostics; turn off for very long runs.
    #[serde(default = "default_true")]
    pub retain_blocks: bool,
    /// Center `Z` at this velocity instead of the plug-in estimate.
    #[serde(default)]
    pub external_velocity: Option<Vec<f64>>,
    #[serde(default = "default_lyapunov_epsilon")]
    pub lyapunov_epsilon: f64,
}

impl ExperimentConfig {
    /// A config for `model` with defaults everywhere else and `u_list = [ell]`.
    pub fn new(model: ModelSpec, ell: Vec<f64>, horizon: usize) -> Self {
        Self {
            model,
            u_list: vec![ell.clone()],
            ell,
            horizon,
            replicas: default_replicas(),
            guard: default_guard(),
            master_seed: 0,
            checkpoints: CheckpointRange::default(),
            gamma: default_gamma(),
            c: default_c(),
            output_dir: default_output_dir(),
            fixed_env: false,
            workers: None,
            bootstrap_resamples: default_resamples(),
            retain_blocks: true,
            external_velocity: None,
            lyapunov_epsilon: default_lyapunov_epsilon(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text).map_err(|e| LabError::Parse {
            line: e.line() as u64,
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        if cfg.u_list.is_empty() {
            cfg.u_list.push(cfg.ell.clone());
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Checks every invariant and returns the validated model.
    ///
    /// `horizon = 0` is accepted as a degenerate run; otherwise `guard` must
    /// be smaller than `horizon`.
    pub fn validate(&self) -> Result<EnvironmentModel> {
        let model = self.model.model()?;
        let d = model.dimension;
        if self.replicas == 0 {
            return Err(LabError::config("replicas must be at least 1"));
        }
        if self.horizon > MAX_HORIZON {
            return Err(LabError::config(format!("horizon {} exceeds 2^40", self.horizon)));
        }
        if self.horizon > 0 && self.guard >= self.horizon {
            return Err(LabError::config(format!("guard {} must be smaller than horizon {}", self.guard, self.horizon)));
        }
        let check_dir = |name: &str, u: &[f64]| -> Result<()> {
            if u.len() != d {
                return Err(LabError::config(format!("{name} has {} components, model dimension is {d}", u.len())));
            }
            check_unit(u).map_err(|e| LabError::config(format!("{name}: {e}")))
        };
        check_dir("ell", &self.ell)?;
        if self.u_list.is_empty() {
            return Err(LabError::config("u_list is empty"));
        }
        for (j, u) in self.u_list.iter().enumerate() {
            check_dir(&format!("u_list[{j}]"), u)?;
        }
        if let Some(v) = &self.external_velocity {
            if v.len() != d || v.iter().any(|x| !x.is_finite()) {
                return Err(LabError::config("external_velocity must be a finite vector of the model dimension"));
            }
        }
        if self.checkpoints.min_exp > self.checkpoints.max_exp || self.checkpoints.max_exp > 40 {
            return Err(LabError::config("checkpoints need min_exp <= max_exp <= 40"));
        }
        rwre_core::statistics::TailDiagnosticConfig::new(self.gamma, self.c)
            .map_err(|e| LabError::config(e.to_string()))?;
        if !(self.lyapunov_epsilon > 0.0 && self.lyapunov_epsilon < 1.0) {
            return Err(LabError::config("lyapunov_epsilon must lie in (0, 1)"));
        }
        if self.workers == Some(0) {
            return Err(LabError::config("workers must be at least 1"));
        }
        Ok(model)
    }

    /// Seeds of replica `index`.
    pub fn replica_seeds(&self, index: usize) -> ReplicaSeeds {
        let env_seed = if self.fixed_env {
            self.model.env_seed
        } else {
            derive_seed(self.master_seed, tag::ENVIRONMENT, index as u64)
        };
        ReplicaSeeds { replica: index, env_seed, walk_seed: derive_seed(self.master_seed, tag::WALK, index as u64) }
    }

    pub fn environment(&self, model: &EnvironmentModel, index: usize) -> EnvironmentView {
        EnvironmentView::new(model.clone(), self.replica_seeds(index).env_seed)
    }

    pub fn bootstrap_seed(&self) -> u64 {
        derive_seed(self.master_seed, tag::BOOTSTRAP, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReplicaSeeds {
    pub replica: usize,
    pub env_seed: u64,
    pub walk_seed: u64,
}
