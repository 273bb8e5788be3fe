//! TOML experiment configuration.
//!
//! Parsing is strict: unknown keys are rejected, and keys that do not apply to
//! the selected policy or adversary kind are rejected too. The digest is the
//! SHA-256 of the canonical JSON form of the configuration after command-line
//! overrides, so two runs share a digest iff they share every input.

use std::path::Path;

use regretlab_core::engine::{
    AdversarySpec, AlphaSpec, ExperimentConfig, FixedPattern, Instance, PolicySpec, Rate, Verbosity,
};
use regretlab_core::policies::AccountsOverrides;
use regretlab_core::GameParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub game: GameSection,
    pub policy: PolicySection,
    pub adversary: AdversarySection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub arms: usize,
    pub horizon: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Accounts,
    Exp3,
    Hedge,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub kind: PolicyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barrier_exponent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryKind {
    Fixed,
    Stochastic,
    Biased,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    Zero,
    Cyclic,
    Prefix,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversarySection {
    pub kind: AdversaryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_gamma_multiple: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceLevel {
    #[default]
    None,
    Summary,
    Full,
}

impl TraceLevel {
    pub fn verbosity(self) -> Verbosity {
        match self {
            TraceLevel::None => Verbosity::None,
            TraceLevel::Summary => Verbosity::Summary,
            TraceLevel::Full => Verbosity::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trace: TraceLevel,
    #[serde(default)]
    pub checked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Horizon,
    Alpha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replications: Option<u64>,
    pub checked: bool,
    pub trace: Option<TraceLevel>,
}

fn config_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

fn reject_extra(section: &str, kind: &str, keys: &[(&str, bool)]) -> LabResult<()> {
    match keys.iter().find(|(_, present)| *present) {
        Some((key, _)) => Err(config_err(format!("{section}.{key} does not apply to kind \"{kind}\""))),
        None => Ok(()),
    }
}

fn require<T: Copy>(section: &str, key: &str, value: Option<T>) -> LabResult<T> {
    value.ok_or_else(|| config_err(format!("{section}.{key} is required")))
}

impl ConfigFile {
    pub fn parse(text: &str) -> LabResult<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.check_kinds()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(msg) => config_err(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn check_kinds(&self) -> LabResult<()> {
        let p = &self.policy;
        match p.kind {
            PolicyKind::Accounts => reject_extra(
                "policy",
                "accounts",
                &[
                    ("gamma", p.gamma.is_some()),
                    ("gamma_exponent", p.gamma_exponent.is_some()),
                    ("eta", p.eta.is_some()),
                    ("eta_exponent", p.eta_exponent.is_some()),
                ],
            )?,
            PolicyKind::Exp3 => {
                reject_extra("policy", "exp3", &Self::accounts_keys(p))?;
                require("policy", "gamma", p.gamma)?;
                require("policy", "eta", p.eta)?;
            }
            PolicyKind::Hedge => {
                let mut keys = Self::accounts_keys(p).to_vec();
                keys.extend([("gamma", p.gamma.is_some()), ("gamma_exponent", p.gamma_exponent.is_some())]);
                reject_extra("policy", "hedge", &keys)?;
                require("policy", "eta", p.eta)?;
            }
            PolicyKind::Uniform => {
                let mut keys = Self::accounts_keys(p).to_vec();
                keys.extend([
                    ("gamma", p.gamma.is_some()),
                    ("gamma_exponent", p.gamma_exponent.is_some()),
                    ("eta", p.eta.is_some()),
                    ("eta_exponent", p.eta_exponent.is_some()),
                ]);
                reject_extra("policy", "uniform", &keys)?;
            }
        }

        let a = &self.adversary;
        let keys = [
            ("pattern", a.pattern.is_some()),
            ("rows", a.rows.is_some()),
            ("means", a.means.is_some()),
            ("epsilon", a.epsilon.is_some()),
            ("alpha", a.alpha.is_some()),
            ("alpha_gamma_multiple", a.alpha_gamma_multiple.is_some()),
        ];
        let others = |allowed: &[&str]| -> Vec<(&str, bool)> {
            keys.iter().copied().filter(|(k, _)| !allowed.contains(k)).collect()
        };
        match a.kind {
            AdversaryKind::Fixed => {
                reject_extra("adversary", "fixed", &others(&["pattern", "rows"]))?;
                let pattern = require("adversary", "pattern", a.pattern)?;
                let needs_rows = matches!(pattern, PatternKind::Cyclic | PatternKind::Prefix);
                match (needs_rows, a.rows.is_some()) {
                    (true, false) => return Err(config_err("adversary.rows is required for this pattern")),
                    (false, true) => return Err(config_err("adversary.rows does not apply to this pattern")),
                    _ => {}
                }
            }
            AdversaryKind::Stochastic => {
                reject_extra("adversary", "stochastic", &others(&["means"]))?;
                if a.means.is_none() {
                    return Err(config_err("adversary.means is required"));
                }
            }
            AdversaryKind::Biased => reject_extra("adversary", "biased", &others(&["epsilon"]))?,
            AdversaryKind::Threshold => {
                reject_extra("adversary", "threshold", &others(&["alpha", "alpha_gamma_multiple"]))?;
                if a.alpha.is_some() == a.alpha_gamma_multiple.is_some() {
                    return Err(config_err(
                        "exactly one of adversary.alpha and adversary.alpha_gamma_multiple is required",
                    ));
                }
            }
        }

        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(config_err("sweep.values must not be empty"));
            }
            match sweep.axis {
                SweepAxis::Horizon => {
                    if sweep.values.iter().any(|v| !(*v >= 1.0 && v.fract() == 0.0 && *v <= u32::MAX as f64)) {
                        return Err(config_err("sweep.values must be positive integers for axis \"horizon\""));
                    }
                }
                SweepAxis::Alpha => {
                    if a.kind != AdversaryKind::Threshold {
                        return Err(config_err("sweep axis \"alpha\" requires adversary kind \"threshold\""));
                    }
                    if sweep.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                        return Err(config_err("sweep.values must lie in [0, 1] for axis \"alpha\""));
                    }
                }
            }
        }
        Ok(())
    }

    fn accounts_keys(p: &PolicySection) -> [(&'static str, bool); 3] {
        [
            ("eta_override", p.eta_override.is_some()),
            ("theta_override", p.theta_override.is_some()),
            ("barrier_exponent", p.barrier_exponent.is_some()),
        ]
    }

    /// Apply command-line overrides and fill required experiment keys.
    pub fn with_overrides(mut self, o: &Overrides) -> LabResult<Self> {
        let e = &mut self.experiment;
        if o.seed.is_some() {
            e.seed = o.seed;
        }
        if o.replications.is_some() {
            e.replications = o.replications;
        }
        if o.checked {
            e.checked = true;
        }
        if let Some(t) = o.trace {
            e.trace = t;
        }
        require("experiment", "seed (or --seed)", e.seed)?;
        let n = require("experiment", "replications (or --reps)", e.replications)?;
        if n < 1 {
            return Err(config_err("experiment.replications must be at least 1"));
        }
        Ok(self)
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    fn policy_spec(&self) -> PolicySpec {
        let p = &self.policy;
        let rate = |coef: Option<f64>, exponent: Option<f64>| Rate {
            coef: coef.unwrap_or(0.0),
            exponent: exponent.unwrap_or(0.0),
        };
        match p.kind {
            PolicyKind::Accounts => PolicySpec::Accounts(AccountsOverrides {
                eta: p.eta_override,
                theta: p.theta_override,
                barrier_exponent: p.barrier_exponent,
            }),
            PolicyKind::Exp3 => PolicySpec::Exp3 {
                gamma: rate(p.gamma, p.gamma_exponent),
                eta: rate(p.eta, p.eta_exponent),
            },
            PolicyKind::Hedge => PolicySpec::Hedge { eta: rate(p.eta, p.eta_exponent) },
            PolicyKind::Uniform => PolicySpec::Uniform,
        }
    }

    fn adversary_spec(&self, alpha: Option<f64>) -> AdversarySpec {
        let a = &self.adversary;
        match a.kind {
            AdversaryKind::Fixed => {
                let rows = a.rows.clone().unwrap_or_default();
                AdversarySpec::Fixed(match a.pattern.unwrap_or(PatternKind::Zero) {
                    PatternKind::Zero => FixedPattern::Zero,
                    PatternKind::Cyclic => FixedPattern::Cyclic(rows),
                    PatternKind::Prefix => FixedPattern::Prefix(rows),
                    PatternKind::Random => FixedPattern::Random,
                })
            }
            AdversaryKind::Stochastic => AdversarySpec::Stochastic {
                means: a.means.clone().unwrap_or_default(),
            },
            AdversaryKind::Biased => AdversarySpec::Biased { epsilon: a.epsilon },
            AdversaryKind::Threshold => AdversarySpec::Threshold {
                alpha: match (alpha, a.alpha, a.alpha_gamma_multiple) {
                    (Some(v), _, _) | (None, Some(v), _) => AlphaSpec::Fixed(v),
                    (None, None, m) => AlphaSpec::GammaMultiple(m.unwrap_or(0.0)),
                },
            },
        }
    }

    /// Engine configuration, optionally with the horizon or threshold replaced
    /// by a sweep value. Requires [`ConfigFile::with_overrides`] first.
    pub fn experiment(&self, horizon: Option<usize>, alpha: Option<f64>) -> LabResult<ExperimentConfig> {
        let params = GameParams::new(self.game.arms, horizon.unwrap_or(self.game.horizon))
            .map_err(|e| config_err(e.to_string()))?;
        Ok(ExperimentConfig {
            params,
            policy: self.policy_spec(),
            adversary: self.adversary_spec(alpha),
            replications: require("experiment", "replications", self.experiment.replications)?,
            seed: require("experiment", "seed", self.experiment.seed)?,
            verbosity: self.experiment.trace.verbosity(),
            checked: self.experiment.checked,
        })
    }
}

/// Resolve an engine configuration into a runnable instance. Every failure
/// here stems from the configuration.
pub fn instantiate(cfg: &ExperimentConfig) -> LabResult<Instance> {
    cfg.instance().map_err(|e| config_err(e.to_string()))
}
