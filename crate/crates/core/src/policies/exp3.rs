use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{check_cost, FeedbackMode, Policy};
use crate::model::GameParams;
use crate::{Error, Result};

/// Weights below this trigger a rescale by the largest weight.
const RESCALE_BELOW: f64 = 1e-300;

/// Cost-based Exp3: exponential weights on importance-weighted cost
/// estimates, mixed with uniform exploration at total rate `gamma`.
///
/// `p_j = (1 - gamma) w_j / sum w + gamma / K`. After pulling `M` with cost
/// `c`, only `w_M` changes: `w_M *= exp(-eta c / p_M)`.
#[derive(Debug, Clone)]
pub struct Exp3 {
    params: GameParams,
    gamma: f64,
    eta: f64,
    weights: Vec<f64>,
    distribution: Vec<f64>,
}

impl Exp3 {
    pub fn new(params: GameParams, gamma: f64, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::config(format!("exp3 gamma must lie in [0, 1], got {gamma}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::config(format!("exp3 eta must be positive, got {eta}")));
        }
        let k = params.arms();
        Self::from_weights(params, gamma, eta, vec![1.0; k])
    }

    pub fn from_weights(params: GameParams, gamma: f64, eta: f64, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != params.arms() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::argument("exp3 weights must be positive, one per arm"));
        }
        let mut policy = Self {
            params,
            gamma,
            eta,
            weights,
            distribution: vec![0.0; params.arms()],
        };
        policy.refresh();
        Ok(policy)
    }

    fn refresh(&mut self) {
        let total: f64 = self.weights.iter().sum();
        let floor = self.gamma / self.params.arms() as f64;
        for (p, w) in self.distribution.iter_mut().zip(&self.weights) {
            *p = (1.0 - self.gamma) * (w / total) + floor;
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn step(&mut self, arm: usize, cost: f64) -> Result<()> {
        self.params.check_arm(arm)?;
        check_cost(cost)?;
        if cost == 0.0 {
            return Ok(());
        }
        let estimate = cost / self.distribution[arm];
        self.weights[arm] *= libm::exp(-self.eta * estimate);
        if self.weights[arm] < RESCALE_BELOW {
            let max = self.weights.iter().copied().fold(0.0, f64::max);
            self.weights.iter_mut().for_each(|w| *w /= max);
            if self.weights[arm] == 0.0 {
                self.weights[arm] = f64::MIN_POSITIVE;
            }
        }
        self.refresh();
        Ok(())
    }
}

impl Policy for Exp3 {
    fn params(&self) -> GameParams {
        self.params
    }

    fn distribution(&self) -> &[f64] {
        &self.distribution
    }

    fn feedback_mode(&self) -> FeedbackMode {
        FeedbackMode::Bandit
    }

    fn observe(&mut self, arm: usize, cost: f64) -> Result<()> {
        self.step(arm, cost)
    }

    fn reset(&mut self, params: GameParams) -> Result<()> {
        *self = Self::new(params, self.gamma, self.eta)?;
        Ok(())
    }
}
