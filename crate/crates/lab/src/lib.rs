//! Experiment harness for `rwre-core`: JSON configuration, deterministic
//! replica scheduling, CSV/JSON file formats, the acceptance checks and the
//! `rwre` command-line tool.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod harness;
pub mod io;

pub use config::{CheckpointRange, ExperimentConfig, ModelSpec, ReplicaSeeds};
pub use error::{LabError, Result};
pub use harness::{analyze_file, run, run_experiment, RunManifest, RunResult, Stages};
