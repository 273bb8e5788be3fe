//! Experiment runner for adversarial bandit policies: TOML configs, Monte
//! Carlo batches on a thread pool, CSV/JSON artifacts, sweeps, tiny-game
//! minimax reports and the acceptance suite.

pub mod cli;
pub mod config;
pub mod error;
pub mod minimax;
pub mod montecarlo;
pub mod report;
pub mod sweep;
pub mod trace;
pub mod verify;

pub use error::{LabError, LabResult};
