//! JSON artifacts: run summaries and run metadata.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use regretlab_core::engine::{tail_bound, InstanceInfo, SummaryStats, SUMMARY_QUANTILES};
use regretlab_core::GameParams;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

pub const ARTIFACT_VERSION: &str = concat!("regretlab-", env!("CARGO_PKG_VERSION"));

/// Tail-bound parameters sampled in every summary.
pub const TAIL_ALPHAS: [f64; 3] = [2.0, 4.0, 8.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSample {
    pub alpha: f64,
    /// `(alpha + 7) sqrt(T K ln K)`.
    pub threshold: f64,
    /// Fraction of replications with regret at least `threshold`.
    pub empirical: f64,
    /// Theoretical tail probability, clamped to `[0, 1]`.
    pub bound: f64,
    pub bound_raw: f64,
    pub trivially_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_digest: String,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub quantiles: BTreeMap<String, f64>,
    pub tail_samples: Vec<TailSample>,
}

impl Summary {
    pub fn new(digest: &str, params: GameParams, stats: &SummaryStats) -> LabResult<Self> {
        let tail_samples = TAIL_ALPHAS
            .iter()
            .map(|&alpha| {
                let b = tail_bound(params.arms(), params.horizon(), alpha)?;
                Ok(TailSample {
                    alpha,
                    threshold: b.threshold,
                    empirical: stats.tail(b.threshold),
                    bound: b.bound,
                    bound_raw: b.bound_raw,
                    trivially_satisfied: b.trivially_satisfied,
                })
            })
            .collect::<LabResult<_>>()?;
        Ok(Self {
            config_digest: digest.to_owned(),
            n: stats.n(),
            mean: stats.mean,
            std: stats.std,
            min: stats.min,
            max: stats.max,
            quantiles: SUMMARY_QUANTILES
                .iter()
                .map(|&q| (q.to_string(), stats.quantile(q)))
                .collect(),
            tail_samples,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub artifact_version: String,
    pub config_digest: String,
    pub command: String,
    pub policy: String,
    pub adversary: String,
    /// The adversary reads the gambler's announced distribution.
    pub white_box: bool,
    /// Policy parameters were overridden away from the analyzed values.
    pub non_conforming: bool,
    pub degenerate: bool,
    /// 1-based.
    pub distinguished_arm: Option<usize>,
    pub threshold_alpha: Option<f64>,
    pub exp3_gamma: Option<f64>,
    pub exp3_eta: Option<f64>,
    pub warnings: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str, digest: &str, policy: &str, adversary: &str, info: &InstanceInfo) -> Self {
        let mut warnings = Vec::new();
        if !info.conforming {
            warnings.push("policy parameters overridden; regret guarantees do not apply".to_owned());
        }
        if info.degenerate {
            warnings.push(
                "eta * K > 1 (T < K ln K): the exploration floor exceeds 1/K and checked mode may flag Prop 6.3"
                    .to_owned(),
            );
        }
        Self {
            artifact_version: ARTIFACT_VERSION.to_owned(),
            config_digest: digest.to_owned(),
            command: command.to_owned(),
            policy: policy.to_owned(),
            adversary: adversary.to_owned(),
            white_box: info.white_box,
            non_conforming: !info.conforming,
            degenerate: info.degenerate,
            distinguished_arm: info.distinguished_arm.map(|j| j + 1),
            threshold_alpha: info.threshold_alpha,
            exp3_gamma: info.exp3_gamma,
            exp3_eta: info.exp3_eta,
            warnings,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> LabResult<()> {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    fs::write(path, s).map_err(|e| LabError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> LabResult<()> {
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

/// Create `dir`, refusing if it already holds artifacts of another config.
pub fn prepare_out_dir(dir: &Path, digest: &str) -> LabResult<()> {
    let meta = dir.join("metadata.json");
    if meta.exists() {
        let text = fs::read_to_string(&meta).map_err(|e| LabError::io(&meta, e))?;
        let found = serde_json::from_str::<serde_json::Value>(&text)
            .ok()
            .and_then(|v| v.get("config_digest").and_then(|d| d.as_str()).map(str::to_owned))
            .unwrap_or_default();
        if found != digest {
            return Err(LabError::DigestMismatch {
                dir: dir.to_owned(),
                found,
                expected: digest.to_owned(),
            });
        }
    }
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
}
