use alloc::vec;
use alloc::vec::Vec;

use super::checks::{check_normalization, AccountsChecker, DriftChecker};
use super::config::{Instance, Verbosity};
use crate::adversaries::{Adversary, RoundContext};
use crate::model::{CostVector, GameParams, RegretLedger, RoundRecord};
use crate::numeric::is_strict_distribution;
use crate::policies::{potential_phi, Accounts, FeedbackMode, Policy};
use crate::rng::{sample_index, substream, Role};
use crate::{Error, Result};
use rand_core::RngCore;

/// Everything known at the end of one round.
#[derive(Debug, Clone, Copy)]
pub struct RoundView<'a> {
    /// 1-based.
    pub round: usize,
    /// Distribution announced at the start of the round.
    pub distribution: &'a [f64],
    pub chosen: usize,
    pub costs: &'a CostVector,
    pub ledger: &'a RegretLedger,
    /// Accounts state after the round's update, when the gambler is Accounts.
    pub accounts: Option<&'a Accounts>,
}

impl RoundView<'_> {
    pub fn incurred(&self) -> f64 {
        self.costs.get(self.chosen)
    }
}

pub trait RoundObserver {
    fn on_round(&mut self, view: &RoundView<'_>) -> Result<()>;
}

pub struct NoopObserver;

impl RoundObserver for NoopObserver {
    fn on_round(&mut self, _: &RoundView<'_>) -> Result<()> {
        Ok(())
    }
}

impl<F: FnMut(&RoundView<'_>) -> Result<()>> RoundObserver for F {
    fn on_round(&mut self, view: &RoundView<'_>) -> Result<()> {
        self(view)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    pub regret: f64,
    pub ledger: RegretLedger,
    /// Final `(C_hat, A)` when the gambler is Accounts.
    pub accounts_state: Option<(Vec<f64>, Vec<f64>)>,
    /// Inequalities verified in checked mode.
    pub checks: u64,
}

/// Play one episode of `policy` against `adversary`.
///
/// Each round, in this order:
/// 1. the gambler announces `p`;
/// 2. the adversary commits costs given the choice history and `p`;
/// 3. the arm is sampled from `p` with `gambler_rng`;
/// 4. the gambler gets the incurred cost (or the full vector);
/// 5. ledger, checks and observer are updated.
///
/// The adversary therefore never sees the current round's arm.
#[allow(clippy::too_many_arguments)]
pub fn play<P, A, O>(
    params: GameParams,
    policy: &mut P,
    adversary: &mut A,
    gambler_rng: &mut dyn RngCore,
    adversary_rng: &mut dyn RngCore,
    checked: bool,
    observer: &mut O,
) -> Result<EpisodeOutcome>
where
    P: Policy + ?Sized,
    A: Adversary + ?Sized,
    O: RoundObserver + ?Sized,
{
    let k = params.arms();
    if policy.params() != params || adversary.params() != params {
        return Err(Error::Protocol("policy, adversary and game disagree on parameters".into()));
    }
    let mut ledger = RegretLedger::new(params);
    let mut history = Vec::with_capacity(params.horizon());
    let mut announced = vec![0.0; k];
    let mut costs = CostVector::zeros(k);

    let mut accounts_checker = match (checked, policy.as_accounts()) {
        (true, Some(a)) => Some(AccountsChecker::new(a)?),
        _ => None,
    };
    let mut drift_checker = match (checked, adversary.threshold_alpha()) {
        (true, Some(alpha)) => Some(DriftChecker::new(alpha)),
        _ => None,
    };

    for round in 1..=params.horizon() {
        announced.copy_from_slice(policy.distribution());
        if checked {
            check_normalization(&announced, round)?;
        } else if !is_strict_distribution(&announced, 1e-12) {
            return Err(Error::Protocol(alloc::format!(
                "round {round}: policy announced an invalid distribution"
            )));
        }
        if let (Some(ch), Some(a)) = (accounts_checker.as_mut(), policy.as_accounts()) {
            ch.before_round(round, a)?;
        }
        if let Some(d) = drift_checker.as_mut() {
            d.before_round(&announced);
        }

        let ctx = RoundContext {
            round,
            history: &history,
            announced: &announced,
        };
        adversary.fill_costs(ctx, adversary_rng, &mut costs)?;
        let chosen = sample_index(&announced, gambler_rng);
        match policy.feedback_mode() {
            FeedbackMode::Bandit => policy.observe(chosen, costs.get(chosen))?,
            FeedbackMode::FullInformation => policy.observe_full(&costs)?,
        }
        ledger.record(&costs, chosen)?;
        history.push(chosen);

        if let (Some(ch), Some(a)) = (accounts_checker.as_mut(), policy.as_accounts()) {
            ch.after_round(round, chosen, &costs, a)?;
        }
        if let Some(d) = drift_checker.as_mut() {
            d.after_round(round, policy.distribution())?;
        }

        observer.on_round(&RoundView {
            round,
            distribution: &announced,
            chosen,
            costs: &costs,
            ledger: &ledger,
            accounts: policy.as_accounts(),
        })?;
    }

    let checks = accounts_checker.as_ref().map_or(0, |c| c.checks())
        + drift_checker.as_ref().map_or(0, |d| d.checks());
    Ok(EpisodeOutcome {
        regret: ledger.final_regret()?,
        accounts_state: policy
            .as_accounts()
            .map(|a| (a.estimates().to_vec(), a.accounts().to_vec())),
        ledger,
        checks,
    })
}

/// Run replication `replication` of a resolved configuration.
pub fn run_episode<O: RoundObserver + ?Sized>(
    instance: &Instance,
    replication: u64,
    observer: &mut O,
) -> Result<EpisodeOutcome> {
    let cfg = &instance.config;
    let mut policy = instance.policy.clone();
    let mut adversary = instance.adversary.clone();
    let mut gambler_rng = substream(cfg.seed, replication, Role::Gambler);
    let mut adversary_rng = substream(cfg.seed, replication, Role::Adversary);
    play(
        cfg.params,
        &mut policy,
        &mut adversary,
        &mut gambler_rng,
        &mut adversary_rng,
        cfg.checked,
        observer,
    )
}

/// In-memory trace of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rounds: Vec<RoundRecord>,
    /// Per-round potentials `Phi_j(C_hat^i)` (Accounts, full verbosity).
    pub potentials: Vec<Vec<f64>>,
    /// Per-round accounts `A^i` (Accounts, full verbosity).
    pub accounts: Vec<Vec<f64>>,
    pub outcome: EpisodeOutcome,
}

impl RunTrace {
    pub fn record(instance: &Instance, replication: u64, verbosity: Verbosity) -> Result<Self> {
        let mut collector = TraceCollector::new(verbosity);
        let outcome = run_episode(instance, replication, &mut collector)?;
        Ok(collector.finish(outcome))
    }

    pub fn regret(&self) -> f64 {
        self.outcome.regret
    }
}

/// Observer that keeps round records in memory.
#[derive(Debug, Clone, Default)]
pub struct TraceCollector {
    verbosity: Verbosity,
    rounds: Vec<RoundRecord>,
    potentials: Vec<Vec<f64>>,
    accounts: Vec<Vec<f64>>,
}

impl TraceCollector {
    pub fn new(verbosity: Verbosity) -> Self {
        Self {
            verbosity,
            ..Self::default()
        }
    }

    pub fn finish(self, outcome: EpisodeOutcome) -> RunTrace {
        RunTrace {
            rounds: self.rounds,
            potentials: self.potentials,
            accounts: self.accounts,
            outcome,
        }
    }
}

impl RoundObserver for TraceCollector {
    fn on_round(&mut self, view: &RoundView<'_>) -> Result<()> {
        if self.verbosity == Verbosity::None {
            return Ok(());
        }
        self.rounds.push(RoundRecord {
            round: view.round,
            distribution: view.distribution.to_vec(),
            chosen: view.chosen,
            costs: view.costs.clone(),
            incurred: view.incurred(),
        });
        if let (Verbosity::Full, Some(a)) = (self.verbosity, view.accounts) {
            let phi = (0..a.estimates().len())
                .map(|j| potential_phi(a.estimates(), j, a.eta()))
                .collect::<Result<Vec<_>>>()?;
            self.potentials.push(phi);
            self.accounts.push(a.accounts().to_vec());
        }
        Ok(())
    }
}
