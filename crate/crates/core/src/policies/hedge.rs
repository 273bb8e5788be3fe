use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::softmax::softmax_into;
use super::{check_cost, FeedbackMode, Policy};
use crate::model::{CostVector, GameParams};
use crate::{Error, Result};

/// Full-information exponential weights over cumulative observed costs.
#[derive(Debug, Clone)]
pub struct Hedge {
    params: GameParams,
    eta: f64,
    totals: Vec<f64>,
    distribution: Vec<f64>,
}

impl Hedge {
    pub fn new(params: GameParams, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::config(format!("hedge eta must be positive, got {eta}")));
        }
        let k = params.arms();
        Ok(Self {
            params,
            eta,
            totals: vec![0.0; k],
            distribution: vec![1.0 / k as f64; k],
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    pub fn step(&mut self, costs: &CostVector) -> Result<()> {
        if costs.arms() != self.params.arms() {
            return Err(Error::argument("cost vector length does not match arm count"));
        }
        for &c in costs.as_slice() {
            check_cost(c)?;
        }
        for (l, &c) in self.totals.iter_mut().zip(costs.as_slice()) {
            *l += c;
        }
        softmax_into(&self.totals, self.eta, &mut self.distribution)
    }
}

impl Policy for Hedge {
    fn params(&self) -> GameParams {
        self.params
    }

    fn distribution(&self) -> &[f64] {
        &self.distribution
    }

    fn feedback_mode(&self) -> FeedbackMode {
        FeedbackMode::FullInformation
    }

    fn observe_full(&mut self, costs: &CostVector) -> Result<()> {
        self.step(costs)
    }

    fn reset(&mut self, params: GameParams) -> Result<()> {
        *self = Self::new(params, self.eta)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(c: &[f64]) -> CostVector {
        CostVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn zero_costs_do_nothing() {
        let mut h = Hedge::new(GameParams::new(2, 10).unwrap(), 1.0).unwrap();
        h.step(&cv(&[0.0, 0.0])).unwrap();
        assert_eq!(h.totals(), &[0.0, 0.0]);
        assert_eq!(h.distribution(), &[0.5, 0.5]);
    }

    #[test]
    fn one_round_update() {
        let mut h = Hedge::new(GameParams::new(2, 10).unwrap(), 1.0).unwrap();
        h.step(&cv(&[1.0, 0.0])).unwrap();
        let e = libm::exp(-1.0);
        assert!((h.distribution()[0] - e / (e + 1.0)).abs() < 1e-15);
        assert!((h.distribution()[1] - 1.0 / (e + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn equal_columns_stay_uniform() {
        let mut h = Hedge::new(GameParams::new(2, 50).unwrap(), 0.7).unwrap();
        for i in 0..50 {
            let x = (i % 7) as f64 / 7.0;
            h.step(&cv(&[x, x])).unwrap();
            assert_eq!(h.distribution(), &[0.5, 0.5]);
        }
    }

    #[test]
    fn bandit_feedback_is_a_protocol_error() {
        let mut h = Hedge::new(GameParams::new(2, 10).unwrap(), 1.0).unwrap();
        assert!(matches!(h.observe(0, 1.0), Err(Error::Protocol(_))));
    }
}
