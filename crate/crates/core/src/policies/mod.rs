//! Gambler algorithms behind one contract.
//!
//! A policy announces a distribution that is a deterministic function of its
//! state; the engine samples the arm and reports back either the incurred
//! cost (bandit feedback) or the whole cost vector (full information).

mod accounts;
mod exp3;
mod hedge;
mod softmax;
mod uniform;

pub use accounts::{standard_eta, standard_theta, Accounts, AccountsOverrides, Branch};
pub use exp3::Exp3;
pub use hedge::Hedge;
pub use softmax::{barrier_g, potential_phi, softmax_f, softmax_into, Barrier, DEFAULT_BARRIER_EXPONENT};
pub use uniform::Uniform;

use crate::model::{CostVector, GameParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackMode {
    /// Only the chosen arm's cost is revealed.
    Bandit,
    /// The full cost vector is revealed.
    FullInformation,
}

pub trait Policy {
    fn params(&self) -> GameParams;

    /// Current action distribution. Sums to one, all entries positive.
    fn distribution(&self) -> &[f64];

    fn feedback_mode(&self) -> FeedbackMode;

    /// Bandit feedback: the chosen arm and the cost it incurred.
    fn observe(&mut self, arm: usize, cost: f64) -> Result<()> {
        let _ = (arm, cost);
        Err(Error::Protocol("policy does not accept bandit feedback".into()))
    }

    /// Full-information feedback.
    fn observe_full(&mut self, costs: &CostVector) -> Result<()> {
        let _ = costs;
        Err(Error::Protocol("policy does not accept full-information feedback".into()))
    }

    /// Return to the initial state for a (possibly different) game.
    fn reset(&mut self, params: GameParams) -> Result<()>;

    /// Accounts internals, for invariant checks and traces.
    fn as_accounts(&self) -> Option<&Accounts> {
        None
    }
}

pub(crate) fn check_cost(cost: f64) -> Result<()> {
    if !crate::model::is_unit_cost(cost) {
        return Err(Error::argument(alloc::format!("cost {cost} outside [0, 1]")));
    }
    Ok(())
}

/// Closed set of built-in policies, used by the engine for configuration-driven runs.
#[derive(Debug, Clone)]
pub enum AnyPolicy {
    Accounts(Accounts),
    Exp3(Exp3),
    Hedge(Hedge),
    Uniform(Uniform),
}

impl AnyPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            AnyPolicy::Accounts(_) => "accounts",
            AnyPolicy::Exp3(_) => "exp3",
            AnyPolicy::Hedge(_) => "hedge",
            AnyPolicy::Uniform(_) => "uniform",
        }
    }

    fn inner(&self) -> &dyn Policy {
        match self {
            AnyPolicy::Accounts(p) => p,
            AnyPolicy::Exp3(p) => p,
            AnyPolicy::Hedge(p) => p,
            AnyPolicy::Uniform(p) => p,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn Policy {
        match self {
            AnyPolicy::Accounts(p) => p,
            AnyPolicy::Exp3(p) => p,
            AnyPolicy::Hedge(p) => p,
            AnyPolicy::Uniform(p) => p,
        }
    }
}

impl Policy for AnyPolicy {
    fn params(&self) -> GameParams {
        self.inner().params()
    }

    fn distribution(&self) -> &[f64] {
        self.inner().distribution()
    }

    fn feedback_mode(&self) -> FeedbackMode {
        self.inner().feedback_mode()
    }

    fn observe(&mut self, arm: usize, cost: f64) -> Result<()> {
        self.inner_mut().observe(arm, cost)
    }

    fn observe_full(&mut self, costs: &CostVector) -> Result<()> {
        self.inner_mut().observe_full(costs)
    }

    fn reset(&mut self, params: GameParams) -> Result<()> {
        self.inner_mut().reset(params)
    }

    fn as_accounts(&self) -> Option<&Accounts> {
        self.inner().as_accounts()
    }
}
