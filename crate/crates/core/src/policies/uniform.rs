use alloc::vec;
use alloc::vec::Vec;

use super::{check_cost, FeedbackMode, Policy};
use crate::model::GameParams;
use crate::Result;

/// Plays every arm with probability `1/K` forever.
#[derive(Debug, Clone)]
pub struct Uniform {
    params: GameParams,
    distribution: Vec<f64>,
}

impl Uniform {
    pub fn new(params: GameParams) -> Self {
        let k = params.arms();
        Self {
            params,
            distribution: vec![1.0 / k as f64; k],
        }
    }
}

impl Policy for Uniform {
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
        self.params.check_arm(arm)?;
        check_cost(cost)
    }

    fn reset(&mut self, params: GameParams) -> Result<()> {
        *self = Self::new(params);
        Ok(())
    }
}
