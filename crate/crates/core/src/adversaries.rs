//! Cost schedules.
//!
//! Adversaries see the gambler's past choices and its announced distribution
//! for the current round before committing the cost vector. Non-adaptive
//! adversaries ignore both. Randomness comes only from the stream the engine
//! passes in, which is independent of the gambler's sampling stream.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::model::{is_unit_cost, CostVector, GameParams};
use crate::rng::{uniform_index, unit_f64};
use crate::{Error, Result};

/// What an adversary may look at when setting round `round`'s costs.
#[derive(Debug, Clone, Copy)]
pub struct RoundContext<'a> {
    /// 1-based round index.
    pub round: usize,
    /// Gambler choices in rounds `1..round`.
    pub history: &'a [usize],
    /// Gambler's announced distribution for this round.
    pub announced: &'a [f64],
}

pub trait Adversary {
    fn params(&self) -> GameParams;

    fn is_adaptive(&self) -> bool;

    /// Write this round's costs into `out`.
    fn fill_costs(
        &mut self,
        ctx: RoundContext<'_>,
        rng: &mut dyn RngCore,
        out: &mut CostVector,
    ) -> Result<()>;

    fn next_costs(&mut self, ctx: RoundContext<'_>, rng: &mut dyn RngCore) -> Result<CostVector> {
        let mut out = CostVector::zeros(self.params().arms());
        self.fill_costs(ctx, rng, &mut out)?;
        Ok(out)
    }

    /// Threshold of a threshold schedule; enables drift checks.
    fn threshold_alpha(&self) -> Option<f64> {
        None
    }
}

/// A precomputed sequence of `T` cost vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedSequence {
    params: GameParams,
    rows: Vec<CostVector>,
}

impl FixedSequence {
    pub fn new(params: GameParams, rows: Vec<CostVector>) -> Result<Self> {
        if rows.len() != params.horizon() {
            return Err(Error::config(format!(
                "fixed sequence has {} rows, horizon is {}",
                rows.len(),
                params.horizon()
            )));
        }
        if rows.iter().any(|r| r.arms() != params.arms()) {
            return Err(Error::config("fixed sequence row length does not match arm count"));
        }
        Ok(Self { params, rows })
    }

    pub fn zeros(params: GameParams) -> Self {
        let rows = vec![CostVector::zeros(params.arms()); params.horizon()];
        Self { params, rows }
    }

    /// Repeat `pattern` cyclically to fill the horizon.
    pub fn cyclic(params: GameParams, pattern: &[CostVector]) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::config("cyclic pattern is empty"));
        }
        let rows = pattern.iter().cycle().take(params.horizon()).cloned().collect();
        Self::new(params, rows)
    }

    /// `prefix` followed by zero costs.
    pub fn zero_padded(params: GameParams, prefix: &[CostVector]) -> Result<Self> {
        if prefix.len() > params.horizon() {
            return Err(Error::config("prefix longer than the horizon"));
        }
        let mut rows = prefix.to_vec();
        rows.resize(params.horizon(), CostVector::zeros(params.arms()));
        Self::new(params, rows)
    }

    /// Independent uniform `[0, 1]` costs drawn once from `rng`.
    pub fn random(params: GameParams, rng: &mut dyn RngCore) -> Self {
        let rows = (0..params.horizon())
            .map(|_| {
                let c = (0..params.arms()).map(|_| unit_f64(rng)).collect();
                CostVector::new(c).expect("unit_f64 is in [0, 1)")
            })
            .collect();
        Self { params, rows }
    }

    pub fn rows(&self) -> &[CostVector] {
        &self.rows
    }

    /// Per-arm totals over the whole horizon.
    pub fn arm_totals(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.params.arms()];
        for row in &self.rows {
            for (t, c) in totals.iter_mut().zip(row.as_slice()) {
                *t += c;
            }
        }
        totals
    }
}

impl Adversary for FixedSequence {
    fn params(&self) -> GameParams {
        self.params
    }

    fn is_adaptive(&self) -> bool {
        false
    }

    fn fill_costs(&mut self, ctx: RoundContext<'_>, _: &mut dyn RngCore, out: &mut CostVector) -> Result<()> {
        let row = self
            .rows
            .get(ctx.round.wrapping_sub(1))
            .ok_or_else(|| Error::Protocol(format!("round {} beyond fixed sequence", ctx.round)))?;
        out.slots().copy_from_slice(row.as_slice());
        Ok(())
    }
}

/// Independent Bernoulli costs with fixed per-arm means.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticIid {
    params: GameParams,
    means: Vec<f64>,
    distinguished: Option<usize>,
}

impl StochasticIid {
    pub fn new(params: GameParams, means: Vec<f64>) -> Result<Self> {
        if means.len() != params.arms() {
            return Err(Error::config("need one mean per arm"));
        }
        if let Some(m) = means.iter().find(|m| !is_unit_cost(**m)) {
            return Err(Error::config(format!("Bernoulli mean {m} outside [0, 1]")));
        }
        Ok(Self {
            params,
            means,
            distinguished: None,
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// The low-cost arm of a biased instance.
    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn sample_costs(&self, rng: &mut dyn RngCore) -> CostVector {
        let mut out = CostVector::zeros(self.params.arms());
        self.sample_into(rng, &mut out);
        out
    }

    fn sample_into(&self, rng: &mut dyn RngCore, out: &mut CostVector) {
        for (c, &mu) in out.slots().iter_mut().zip(&self.means) {
            *c = if unit_f64(rng) < mu { 1.0 } else { 0.0 };
        }
    }
}

/// Default gap of the biased instance: `sqrt(K/T)` capped at `1/2`.
pub fn default_bias(params: GameParams) -> f64 {
    libm::sqrt(params.arms() as f64 / params.horizon() as f64).min(0.5)
}

/// Bernoulli instance where one uniformly chosen arm has mean `1/2 - epsilon`
/// and every other arm has mean `1/2`. The distinguished arm is the one worth
/// finding.
pub fn biased_instance(
    params: GameParams,
    epsilon: Option<f64>,
    rng: &mut dyn RngCore,
) -> Result<StochasticIid> {
    let epsilon = epsilon.unwrap_or_else(|| default_bias(params));
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(Error::argument(format!("bias must lie in [0, 1/2], got {epsilon}")));
    }
    let k = params.arms();
    let good = uniform_index(k, rng);
    let mut means = vec![0.5; k];
    means[good] = 0.5 - epsilon;
    let mut adv = StochasticIid::new(params, means)?;
    adv.distinguished = Some(good);
    Ok(adv)
}

impl Adversary for StochasticIid {
    fn params(&self) -> GameParams {
        self.params
    }

    fn is_adaptive(&self) -> bool {
        false
    }

    fn fill_costs(&mut self, _: RoundContext<'_>, rng: &mut dyn RngCore, out: &mut CostVector) -> Result<()> {
        self.sample_into(rng, out);
        Ok(())
    }
}

/// Charge arm 2 when the gambler's probability of arm 1 is below `alpha`,
/// otherwise charge arm 1. Two arms only.
pub fn threshold_cost(p_first: f64, alpha: f64) -> CostVector {
    if p_first < alpha {
        CostVector::unit(2, 1)
    } else {
        CostVector::unit(2, 0)
    }
}

/// White-box adaptive schedule that pushes the gambler's probability of arm 1
/// toward `alpha` every round.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    params: GameParams,
    alpha: f64,
}

impl Threshold {
    pub fn new(params: GameParams, alpha: f64) -> Result<Self> {
        if params.arms() != 2 {
            return Err(Error::config(format!(
                "threshold adversary needs exactly 2 arms, got {}",
                params.arms()
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::config(format!("threshold alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { params, alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Adversary for Threshold {
    fn params(&self) -> GameParams {
        self.params
    }

    fn is_adaptive(&self) -> bool {
        true
    }

    fn fill_costs(&mut self, ctx: RoundContext<'_>, _: &mut dyn RngCore, out: &mut CostVector) -> Result<()> {
        let p = *ctx
            .announced
            .first()
            .ok_or_else(|| Error::Protocol("threshold adversary needs the announced distribution".into()))?;
        out.set_unit(if p < self.alpha { 1 } else { 0 });
        Ok(())
    }

    fn threshold_alpha(&self) -> Option<f64> {
        Some(self.alpha)
    }
}

/// Closed set of built-in adversaries.
#[derive(Debug, Clone)]
pub enum AnyAdversary {
    Fixed(FixedSequence),
    Stochastic(StochasticIid),
    Threshold(Threshold),
}

impl AnyAdversary {
    pub fn name(&self) -> &'static str {
        match self {
            AnyAdversary::Fixed(_) => "fixed",
            AnyAdversary::Stochastic(_) => "stochastic",
            AnyAdversary::Threshold(_) => "threshold",
        }
    }

    fn inner_mut(&mut self) -> &mut dyn Adversary {
        match self {
            AnyAdversary::Fixed(a) => a,
            AnyAdversary::Stochastic(a) => a,
            AnyAdversary::Threshold(a) => a,
        }
    }

    fn inner(&self) -> &dyn Adversary {
        match self {
            AnyAdversary::Fixed(a) => a,
            AnyAdversary::Stochastic(a) => a,
            AnyAdversary::Threshold(a) => a,
        }
    }
}

impl Adversary for AnyAdversary {
    fn params(&self) -> GameParams {
        self.inner().params()
    }

    fn is_adaptive(&self) -> bool {
        self.inner().is_adaptive()
    }

    fn fill_costs(&mut self, ctx: RoundContext<'_>, rng: &mut dyn RngCore, out: &mut CostVector) -> Result<()> {
        self.inner_mut().fill_costs(ctx, rng, out)
    }

    fn threshold_alpha(&self) -> Option<f64> {
        self.inner().threshold_alpha()
    }
}
