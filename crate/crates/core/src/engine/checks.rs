//! Per-round invariant checks for checked mode.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::CostVector;
use crate::numeric::is_strict_distribution;
use crate::policies::{potential_phi, Accounts, Policy};
use crate::{Invariant, InvariantViolation, Result};

/// Multiplicative slack on probability ratios.
const RATIO_TOL: f64 = 1e-9;
/// Additive slack on potential, account and regret increments.
const DELTA_TOL: f64 = 1e-9;
/// Additive slack on the barrier lower bound.
const FLOOR_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-12;

fn violation(invariant: Invariant, round: usize, arm: Option<usize>, detail: String) -> InvariantViolation {
    InvariantViolation {
        invariant,
        round,
        arm,
        detail,
    }
}

pub(crate) fn check_normalization(p: &[f64], round: usize) -> Result<()> {
    if !is_strict_distribution(p, SUM_TOL) {
        return Err(violation(
            Invariant::Normalization,
            round,
            None,
            format!("distribution {p:?} is not strictly positive or does not sum to 1"),
        )
        .into());
    }
    Ok(())
}

/// Checks an Accounts run round by round.
///
/// With `p^i` the distribution announced in round `i`, `A^{i-1}` the accounts
/// before the round and `Phi_j^i = Phi_j(C_hat^i)`:
///
/// * exploration floor: `exp(eta / g(A_j^{i-1})) p_j^i >= g(A_j^{i-1})`;
/// * step ratio: `p_j^{i+1} / p_j^i` lies in `[exp(-eta/p_j^i), 1]` for the
///   chosen arm and in `[1, exp(eta c_M)]` for the others;
/// * decomposition: for the chosen arm `dR = 0`, `0 <= dPhi + dA <= 1/p_j` and
///   at most one of `dPhi`, `dA` is nonzero; otherwise `dA = 0` and
///   `-c_M <= dPhi <= 0`;
/// * potential range: `Phi_j^0 = ln K / eta` and `Phi_j^i >= 0`.
#[derive(Debug, Clone)]
pub struct AccountsChecker {
    eta: f64,
    phi: Vec<f64>,
    accounts: Vec<f64>,
    announced: Vec<f64>,
    checks: u64,
}

impl AccountsChecker {
    /// Start checking from the policy's current (initial) state.
    pub fn new(policy: &Accounts) -> Result<Self> {
        let k = policy.accounts().len();
        let eta = policy.eta();
        let mut checker = Self {
            eta,
            phi: vec![0.0; k],
            accounts: policy.accounts().to_vec(),
            announced: policy.distribution().to_vec(),
            checks: 0,
        };
        checker.refresh_phi(policy)?;
        if policy.estimates().iter().all(|&c| c == 0.0) {
            let start = libm::log(k as f64) / eta;
            for (j, &phi) in checker.phi.iter().enumerate() {
                if libm::fabs(phi - start) > 1e-9 * start.max(1.0) {
                    return Err(violation(
                        Invariant::PotentialRange,
                        0,
                        Some(j),
                        format!("initial potential {phi} differs from ln K / eta = {start}"),
                    )
                    .into());
                }
            }
        }
        Ok(checker)
    }

    fn refresh_phi(&mut self, policy: &Accounts) -> Result<()> {
        for (j, phi) in self.phi.iter_mut().enumerate() {
            *phi = potential_phi(policy.estimates(), j, self.eta)?;
        }
        Ok(())
    }

    /// Number of individual inequality checks performed so far.
    pub fn checks(&self) -> u64 {
        self.checks
    }

    /// Call with the state at the start of round `round`, before feedback.
    pub fn before_round(&mut self, round: usize, policy: &Accounts) -> Result<()> {
        let p = policy.distribution();
        check_normalization(p, round)?;
        self.announced.copy_from_slice(p);
        self.accounts.copy_from_slice(policy.accounts());
        for (j, (g, &pj)) in policy.barrier_levels().zip(p).enumerate() {
            self.checks += 1;
            if libm::exp(self.eta / g) * pj < g - FLOOR_TOL {
                return Err(violation(
                    Invariant::ExplorationFloor,
                    round,
                    Some(j),
                    format!("exp(eta/g) * p = {} below barrier g = {g} (p = {pj})", libm::exp(self.eta / g) * pj),
                )
                .into());
            }
        }
        Ok(())
    }

    /// Call after the policy has absorbed round `round`'s feedback.
    pub fn after_round(
        &mut self,
        round: usize,
        chosen: usize,
        costs: &CostVector,
        policy: &Accounts,
    ) -> Result<()> {
        let next = policy.distribution();
        check_normalization(next, round)?;
        let prev_phi = self.phi.clone();
        self.refresh_phi(policy)?;
        let c_m = costs.get(chosen);
        for j in 0..next.len() {
            self.checks += 3;
            let p = self.announced[j];
            let ratio = next[j] / p;
            let (lo, hi) = if j == chosen {
                (libm::exp(-self.eta / p), 1.0)
            } else {
                (1.0, libm::exp(self.eta * c_m))
            };
            if ratio < lo * (1.0 - RATIO_TOL) || ratio > hi * (1.0 + RATIO_TOL) {
                return Err(violation(
                    Invariant::StepRatio,
                    round,
                    Some(j),
                    format!("p ratio {ratio} outside [{lo}, {hi}]"),
                )
                .into());
            }

            let d_r = c_m - costs.get(j);
            let d_phi = self.phi[j] - prev_phi[j];
            let d_a = policy.accounts()[j] - self.accounts[j];
            let ok = if j == chosen {
                let total = d_phi + d_a;
                d_r == 0.0
                    && total >= -DELTA_TOL
                    && total <= 1.0 / p + DELTA_TOL
                    && (libm::fabs(d_phi) <= DELTA_TOL || libm::fabs(d_a) <= DELTA_TOL)
            } else {
                libm::fabs(d_a) <= DELTA_TOL && d_phi >= -c_m - DELTA_TOL && d_phi <= DELTA_TOL
            };
            if !ok {
                return Err(violation(
                    Invariant::PotentialDecomposition,
                    round,
                    Some(j),
                    format!(
                        "dR = {d_r}, dPhi = {d_phi}, dA = {d_a}, p = {p}, chosen = {}",
                        chosen + 1
                    ),
                )
                .into());
            }

            if self.phi[j] < -DELTA_TOL {
                return Err(violation(
                    Invariant::PotentialRange,
                    round,
                    Some(j),
                    format!("potential {} is negative", self.phi[j]),
                )
                .into());
            }
        }
        Ok(())
    }

    /// Potentials `Phi_j(C_hat)` after the last processed round.
    pub fn potentials(&self) -> &[f64] {
        &self.phi
    }
}

/// Against the threshold adversary every multiplicative-weights gambler moves
/// `p_1` toward `alpha`: up when `p_1 < alpha`, otherwise down.
#[derive(Debug, Clone)]
pub struct DriftChecker {
    alpha: f64,
    before: f64,
    checks: u64,
}

impl DriftChecker {
    const TOL: f64 = 1e-12;

    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            before: f64::NAN,
            checks: 0,
        }
    }

    pub fn checks(&self) -> u64 {
        self.checks
    }

    pub fn before_round(&mut self, announced: &[f64]) {
        self.before = announced[0];
    }

    pub fn after_round(&mut self, round: usize, next: &[f64]) -> Result<()> {
        self.checks += 1;
        let (p, q) = (self.before, next[0]);
        let ok = if p < self.alpha { q >= p - Self::TOL } else { q <= p + Self::TOL };
        if !ok {
            return Err(violation(
                Invariant::ThresholdDrift,
                round,
                Some(0),
                format!("p moved from {p} to {q} away from alpha = {}", self.alpha),
            )
            .into());
        }
        Ok(())
    }
}
