use alloc::format;
use alloc::vec::Vec;

use crate::adversaries::{biased_instance, AnyAdversary, FixedSequence, StochasticIid, Threshold};
use crate::model::{CostVector, GameParams};
use crate::policies::{Accounts, AccountsOverrides, AnyPolicy, Exp3, Hedge, Uniform};
use crate::rng::{substream, Role};
use crate::{Error, Result};

/// A rate `coef * T^exponent`; `exponent = 0` is a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate {
    pub coef: f64,
    pub exponent: f64,
}

impl Rate {
    pub fn constant(value: f64) -> Self {
        Self { coef: value, exponent: 0.0 }
    }

    pub fn resolve(&self, horizon: usize) -> f64 {
        if self.exponent == 0.0 {
            self.coef
        } else {
            self.coef * libm::pow(horizon as f64, self.exponent)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    Accounts(AccountsOverrides),
    Exp3 { gamma: Rate, eta: Rate },
    Hedge { eta: Rate },
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixedPattern {
    Zero,
    /// Rows repeated cyclically over the horizon.
    Cyclic(Vec<Vec<f64>>),
    /// Rows followed by zero costs.
    Prefix(Vec<Vec<f64>>),
    /// Uniform `[0, 1]` costs drawn once per configuration from the instance stream.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Fixed(f64),
    /// `alpha = multiple * gamma` of an Exp3 gambler.
    GammaMultiple(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversarySpec {
    Fixed(FixedPattern),
    Stochastic { means: Vec<f64> },
    /// One arm at `1/2 - epsilon`, the rest at `1/2`; `None` means `sqrt(K/T)` capped at `1/2`.
    Biased { epsilon: Option<f64> },
    Threshold { alpha: AlphaSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verbosity {
    #[default]
    None,
    Summary,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: GameParams,
    pub policy: PolicySpec,
    pub adversary: AdversarySpec,
    pub replications: u64,
    pub seed: u64,
    pub verbosity: Verbosity,
    pub checked: bool,
}

/// Facts about a resolved configuration that belong in run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceInfo {
    /// The adversary reads the gambler's announced distribution.
    pub white_box: bool,
    /// No expert override of the Accounts constants.
    pub conforming: bool,
    /// Accounts with `T < K ln K`.
    pub degenerate: bool,
    pub distinguished_arm: Option<usize>,
    pub threshold_alpha: Option<f64>,
    pub exp3_gamma: Option<f64>,
    pub exp3_eta: Option<f64>,
}

/// A configuration resolved into concrete policy and adversary templates.
/// Every replication starts from clones of these.
#[derive(Debug, Clone)]
pub struct Instance {
    pub config: ExperimentConfig,
    pub policy: AnyPolicy,
    pub adversary: AnyAdversary,
    pub info: InstanceInfo,
}

fn rows_to_costs(rows: &[Vec<f64>], arms: usize) -> Result<Vec<CostVector>> {
    rows.iter()
        .map(|r| {
            if r.len() != arms {
                return Err(Error::config(format!(
                    "cost row has {} entries, expected {arms}",
                    r.len()
                )));
            }
            CostVector::new(r.clone()).map_err(|e| Error::config(format!("{e}")))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::config("replications must be at least 1"));
        }
        Ok(())
    }

    pub fn instance(&self) -> Result<Instance> {
        self.validate()?;
        let params = self.params;
        let horizon = params.horizon();
        let mut info = InstanceInfo {
            white_box: false,
            conforming: true,
            degenerate: false,
            distinguished_arm: None,
            threshold_alpha: None,
            exp3_gamma: None,
            exp3_eta: None,
        };

        let policy = match &self.policy {
            PolicySpec::Accounts(overrides) => {
                let a = Accounts::with_overrides(params, *overrides)?;
                info.conforming = a.is_conforming();
                info.degenerate = a.degenerate_regime();
                AnyPolicy::Accounts(a)
            }
            PolicySpec::Exp3 { gamma, eta } => {
                let (gamma, eta) = (gamma.resolve(horizon), eta.resolve(horizon));
                info.exp3_gamma = Some(gamma);
                info.exp3_eta = Some(eta);
                AnyPolicy::Exp3(Exp3::new(params, gamma, eta)?)
            }
            PolicySpec::Hedge { eta } => AnyPolicy::Hedge(Hedge::new(params, eta.resolve(horizon))?),
            PolicySpec::Uniform => AnyPolicy::Uniform(Uniform::new(params)),
        };

        let mut instance_rng = substream(self.seed, 0, Role::Instance);
        let adversary = match &self.adversary {
            AdversarySpec::Fixed(pattern) => AnyAdversary::Fixed(match pattern {
                FixedPattern::Zero => FixedSequence::zeros(params),
                FixedPattern::Cyclic(rows) => {
                    FixedSequence::cyclic(params, &rows_to_costs(rows, params.arms())?)?
                }
                FixedPattern::Prefix(rows) => {
                    FixedSequence::zero_padded(params, &rows_to_costs(rows, params.arms())?)?
                }
                FixedPattern::Random => FixedSequence::random(params, &mut instance_rng),
            }),
            AdversarySpec::Stochastic { means } => {
                AnyAdversary::Stochastic(StochasticIid::new(params, means.clone())?)
            }
            AdversarySpec::Biased { epsilon } => {
                let adv = biased_instance(params, *epsilon, &mut instance_rng)
                    .map_err(|e| Error::config(format!("{e}")))?;
                info.distinguished_arm = adv.distinguished();
                AnyAdversary::Stochastic(adv)
            }
            AdversarySpec::Threshold { alpha } => {
                let alpha = match *alpha {
                    AlphaSpec::Fixed(a) => a,
                    AlphaSpec::GammaMultiple(m) => {
                        let gamma = info.exp3_gamma.ok_or_else(|| {
                            Error::config("alpha as a multiple of gamma requires an exp3 policy")
                        })?;
                        m * gamma
                    }
                };
                info.white_box = true;
                info.threshold_alpha = Some(alpha);
                AnyAdversary::Threshold(Threshold::new(params, alpha)?)
            }
        };

        Ok(Instance {
            config: self.clone(),
            policy,
            adversary,
            info,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn base(policy: PolicySpec, adversary: AdversarySpec) -> ExperimentConfig {
        ExperimentConfig {
            params: GameParams::new(2, 1024).unwrap(),
            policy,
            adversary,
            replications: 1,
            seed: 1,
            verbosity: Verbosity::None,
            checked: false,
        }
    }

    #[test]
    fn rates() {
        assert_eq!(Rate::constant(0.3).resolve(100), 0.3);
        let r = Rate { coef: 1.0, exponent: -0.5 };
        assert!((r.resolve(1024) - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_multiple_alpha() {
        let rate = Rate { coef: 1.0, exponent: -0.5 };
        let cfg = base(
            PolicySpec::Exp3 { gamma: rate, eta: rate },
            AdversarySpec::Threshold { alpha: AlphaSpec::GammaMultiple(3.0) },
        );
        let inst = cfg.instance().unwrap();
        assert!((inst.info.threshold_alpha.unwrap() - 3.0 / 32.0).abs() < 1e-15);
        assert!(inst.info.white_box);

        let cfg = base(
            PolicySpec::Uniform,
            AdversarySpec::Threshold { alpha: AlphaSpec::GammaMultiple(3.0) },
        );
        assert!(matches!(cfg.instance(), Err(Error::Config(_))));
    }

    #[test]
    fn instance_construction_is_deterministic() {
        let cfg = base(PolicySpec::Uniform, AdversarySpec::Biased { epsilon: None });
        let a = cfg.instance().unwrap();
        let b = cfg.instance().unwrap();
        assert_eq!(a.info, b.info);
        assert!(a.info.distinguished_arm.is_some());
    }

    #[test]
    fn rejects_bad_rows() {
        let cfg = base(
            PolicySpec::Uniform,
            AdversarySpec::Fixed(FixedPattern::Cyclic(vec![vec![1.0, 0.0, 0.0]])),
        );
        assert!(matches!(cfg.instance(), Err(Error::Config(_))));
        let cfg = base(PolicySpec::Uniform, AdversarySpec::Fixed(FixedPattern::Prefix(vec![vec![2.0, 0.0]])));
        assert!(matches!(cfg.instance(), Err(Error::Config(_))));
        let mut cfg = base(PolicySpec::Uniform, AdversarySpec::Fixed(FixedPattern::Zero));
        cfg.replications = 0;
        assert!(cfg.instance().is_err());
    }
}
