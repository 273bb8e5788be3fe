use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::softmax::{softmax_into, Barrier, DEFAULT_BARRIER_EXPONENT};
use super::{check_cost, FeedbackMode, Policy};
use crate::model::GameParams;
use crate::{Error, Result};

/// `eta = sqrt(ln K / (T K))`.
pub fn standard_eta(params: GameParams) -> f64 {
    let k = params.arms() as f64;
    libm::sqrt(libm::log(k) / (params.horizon() as f64 * k))
}

/// `theta = sqrt(T K ln K)`.
pub fn standard_theta(params: GameParams) -> f64 {
    let k = params.arms() as f64;
    libm::sqrt(params.horizon() as f64 * k * libm::log(k))
}

/// Expert overrides of the derived constants. Any override makes a run
/// non-conforming.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AccountsOverrides {
    pub eta: Option<f64>,
    pub theta: Option<f64>,
    pub barrier_exponent: Option<f64>,
}

impl AccountsOverrides {
    pub fn is_conforming(&self) -> bool {
        self.eta.is_none() && self.theta.is_none() && self.barrier_exponent.is_none()
    }
}

/// Which vector absorbed the importance-weighted cost of a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The arm was above its barrier; the cost estimate moved.
    Estimate,
    /// The arm was below its barrier; the account moved instead.
    Account,
}

/// The Accounts gambler.
///
/// Plays `p = softmax(C_hat, eta)`. After pulling arm `M` with cost `c`, the
/// importance-weighted cost `c / p_M` is added to the estimate `C_hat_M` when
/// `g(A_M) <= p_M`, and to the account `A_M` otherwise. The account lowers the
/// barrier `g` for that arm, so the arm's probability is held up until enough
/// negative regret has been banked to pay for the extra variance of exploring
/// it less.
#[derive(Debug, Clone)]
pub struct Accounts {
    params: GameParams,
    overrides: AccountsOverrides,
    eta: f64,
    theta: f64,
    barrier: Barrier,
    estimates: Vec<f64>,
    accounts: Vec<f64>,
    distribution: Vec<f64>,
}

impl Accounts {
    pub fn new(params: GameParams) -> Self {
        Self::with_overrides(params, AccountsOverrides::default())
            .expect("derived constants are always valid")
    }

    pub fn with_overrides(params: GameParams, overrides: AccountsOverrides) -> Result<Self> {
        let k = params.arms();
        Self::from_state(params, overrides, vec![0.0; k], vec![0.0; k])
    }

    /// Build a policy mid-run from explicit estimate and account vectors.
    pub fn from_state(
        params: GameParams,
        overrides: AccountsOverrides,
        estimates: Vec<f64>,
        accounts: Vec<f64>,
    ) -> Result<Self> {
        let k = params.arms();
        if estimates.len() != k || accounts.len() != k {
            return Err(Error::argument("state vectors must have one entry per arm"));
        }
        if estimates.iter().chain(&accounts).any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::argument("estimates and accounts must be finite and nonnegative"));
        }
        let eta = overrides.eta.unwrap_or_else(|| standard_eta(params));
        let theta = overrides.theta.unwrap_or_else(|| standard_theta(params));
        let exponent = overrides.barrier_exponent.unwrap_or(DEFAULT_BARRIER_EXPONENT);
        let barrier = Barrier::with_exponent(eta, theta, k, exponent)
            .map_err(|e| Error::config(format!("accounts constants: {e}")))?;
        let mut policy = Self {
            params,
            overrides,
            eta,
            theta,
            barrier,
            estimates,
            accounts,
            distribution: vec![0.0; k],
        };
        policy.refresh()?;
        Ok(policy)
    }

    fn refresh(&mut self) -> Result<()> {
        softmax_into(&self.estimates, self.eta, &mut self.distribution)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn barrier(&self) -> &Barrier {
        &self.barrier
    }

    pub fn estimates(&self) -> &[f64] {
        &self.estimates
    }

    pub fn accounts(&self) -> &[f64] {
        &self.accounts
    }

    pub fn overrides(&self) -> AccountsOverrides {
        self.overrides
    }

    pub fn is_conforming(&self) -> bool {
        self.overrides.is_conforming()
    }

    /// `eta > 1/K`, i.e. `T < K ln K`: the barrier is flat from the start.
    pub fn degenerate_regime(&self) -> bool {
        self.eta * self.params.arms() as f64 > 1.0
    }

    /// Current barrier `g(A_j)` for each arm.
    pub fn barrier_levels(&self) -> impl Iterator<Item = f64> + '_ {
        self.accounts.iter().map(|&a| self.barrier.eval(a))
    }

    /// Apply one round of bandit feedback and report which branch was taken.
    ///
    /// The branch test is `g(A_M) <= p_M` evaluated without tolerance.
    pub fn step(&mut self, arm: usize, cost: f64) -> Result<Branch> {
        self.params.check_arm(arm)?;
        check_cost(cost)?;
        let p = self.distribution[arm];
        let increment = cost / p;
        if self.barrier.eval(self.accounts[arm]) <= p {
            self.estimates[arm] += increment;
            self.refresh()?;
            Ok(Branch::Estimate)
        } else {
            self.accounts[arm] += increment;
            Ok(Branch::Account)
        }
    }
}

impl Policy for Accounts {
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
        self.step(arm, cost).map(|_| ())
    }

    fn reset(&mut self, params: GameParams) -> Result<()> {
        *self = Self::with_overrides(params, self.overrides)?;
        Ok(())
    }

    fn as_accounts(&self) -> Option<&Accounts> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::softmax::softmax_f;

    fn params(k: usize, t: usize) -> GameParams {
        GameParams::new(k, t).unwrap()
    }

    #[test]
    fn constants() {
        let p = params(2, 1000);
        let a = Accounts::new(p);
        assert!((a.eta() - 0.018_616_487_055_295_172).abs() < 1e-12);
        let lnk = core::f64::consts::LN_2;
        assert!((a.eta() * a.theta() - lnk).abs() <= 1e-9 * lnk);
        for (k, t) in [(3, 17), (10, 100_000), (7, 1)] {
            let p = params(k, t);
            let lnk = libm::log(k as f64);
            assert!((standard_eta(p) * standard_theta(p) - lnk).abs() <= 1e-9 * lnk);
        }
    }

    #[test]
    fn fresh_state_is_uniform() {
        let a = Accounts::new(params(4, 500));
        assert!(a.distribution().iter().all(|&x| (x - 0.25).abs() < 1e-15));
        assert!(a.estimates().iter().chain(a.accounts()).all(|&x| x == 0.0));
    }

    #[test]
    fn zero_cost_leaves_state_alone() {
        let mut a = Accounts::new(params(3, 100));
        let before = a.clone();
        a.step(1, 0.0).unwrap();
        assert_eq!(a.estimates(), before.estimates());
        assert_eq!(a.accounts(), before.accounts());
        assert_eq!(a.distribution(), before.distribution());
    }

    #[test]
    fn first_round_takes_estimate_branch_at_equality() {
        let mut a = Accounts::new(params(2, 1000));
        assert!(a.eta() < 0.5);
        assert_eq!(a.barrier().eval(0.0), 0.5);
        assert_eq!(a.step(0, 1.0).unwrap(), Branch::Estimate);
        assert_eq!(a.estimates(), &[2.0, 0.0]);
        assert_eq!(a.accounts(), &[0.0, 0.0]);
    }

    #[test]
    fn account_branch_when_barrier_above_probability() {
        let p = params(2, 1000);
        let eta = standard_eta(p);
        let theta = standard_theta(p);
        // p_1 = 1 / (1 + 99) = 0.01
        let estimates = vec![libm::log(99.0) / eta, 0.0];
        // 1 / (2 (1 + A/theta)^{3/2}) = 0.02
        let account = theta * (libm::pow(25.0, 2.0 / 3.0) - 1.0);
        let mut a =
            Accounts::from_state(p, AccountsOverrides::default(), estimates.clone(), vec![account, 0.0])
                .unwrap();
        assert!((a.distribution()[0] - 0.01).abs() < 1e-12);
        assert!((a.barrier().eval(account) - 0.02).abs() < 1e-12);
        assert_eq!(a.step(0, 0.5).unwrap(), Branch::Account);
        assert!((a.accounts()[0] - account - 50.0).abs() < 1e-9);
        assert_eq!(a.estimates(), estimates.as_slice());
    }

    #[test]
    fn distribution_ignores_accounts() {
        let p = params(2, 1000);
        let eta = standard_eta(p);
        let est = vec![0.0, core::f64::consts::LN_2 / eta];
        let a = Accounts::from_state(p, AccountsOverrides::default(), est.clone(), vec![0.0, 0.0]).unwrap();
        let b = Accounts::from_state(p, AccountsOverrides::default(), est, vec![123.0, 4.0]).unwrap();
        assert!((a.distribution()[0] - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(a.distribution(), b.distribution());
        assert_eq!(a.distribution(), softmax_f(a.estimates(), eta).unwrap().as_slice());
    }

    #[test]
    fn rejects_bad_feedback() {
        let mut a = Accounts::new(params(2, 10));
        assert!(matches!(a.step(0, 1.5), Err(Error::Argument(_))));
        assert!(matches!(a.step(0, -0.5), Err(Error::Argument(_))));
        assert!(matches!(a.step(2, 0.5), Err(Error::Argument(_))));
    }

    #[test]
    fn overrides_mark_non_conforming() {
        let p = params(10, 100);
        assert!(Accounts::new(p).is_conforming());
        let a = Accounts::with_overrides(p, AccountsOverrides { eta: Some(0.9), ..Default::default() })
            .unwrap();
        assert!(!a.is_conforming());
        assert!(a.degenerate_regime());
        assert!(Accounts::with_overrides(p, AccountsOverrides { eta: Some(-1.0), ..Default::default() })
            .is_err());
    }

    #[test]
    fn degenerate_regime_detection() {
        // T < K ln K
        assert!(Accounts::new(params(10, 20)).degenerate_regime());
        assert!(!Accounts::new(params(10, 24)).degenerate_regime());
    }

    #[test]
    fn reset_restores_initial_state() {
        let mut a = Accounts::new(params(2, 100));
        a.step(0, 1.0).unwrap();
        a.reset(params(3, 50)).unwrap();
        assert_eq!(a.estimates(), &[0.0, 0.0, 0.0]);
        assert_eq!(a.eta(), standard_eta(params(3, 50)));
    }
}
