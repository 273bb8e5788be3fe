//! The repeated game between a gambler and a cost-setting adversary.
//!
//! Arms are 0-based throughout the API; files and reports print them 1-based.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::numeric::is_strict_distribution;
use crate::{Error, Result};

/// Arm count and horizon, both known to the players in advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameParams {
    arms: usize,
    horizon: usize,
}

impl GameParams {
    pub fn new(arms: usize, horizon: usize) -> Result<Self> {
        if arms < 2 {
            return Err(Error::config(format!("arm count must be at least 2, got {arms}")));
        }
        if horizon < 1 {
            return Err(Error::config("horizon must be at least 1"));
        }
        Ok(Self { arms, horizon })
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub(crate) fn check_arm(&self, arm: usize) -> Result<()> {
        if arm >= self.arms {
            return Err(Error::argument(format!(
                "arm index {arm} out of range for {} arms",
                self.arms
            )));
        }
        Ok(())
    }
}

/// One round of costs, one entry per arm, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(costs: Vec<f64>) -> Result<Self> {
        if costs.len() < 2 {
            return Err(Error::argument("cost vector needs at least 2 arms"));
        }
        if let Some((j, c)) = costs.iter().enumerate().find(|(_, c)| !is_unit_cost(**c)) {
            return Err(Error::argument(format!("cost {c} for arm {} outside [0, 1]", j + 1)));
        }
        Ok(Self(costs))
    }

    pub fn zeros(arms: usize) -> Self {
        Self(vec![0.0; arms])
    }

    /// Basis vector with cost 1 on `arm` and 0 elsewhere.
    pub fn unit(arms: usize, arm: usize) -> Self {
        let mut c = vec![0.0; arms];
        c[arm] = 1.0;
        Self(c)
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, arm: usize) -> f64 {
        self.0[arm]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Overwrite the entries in place; used by adversaries that reuse a buffer.
    pub fn set_all(&mut self, costs: &[f64]) -> Result<()> {
        if costs.len() != self.0.len() {
            return Err(Error::argument("cost vector length mismatch"));
        }
        if let Some(c) = costs.iter().find(|c| !is_unit_cost(**c)) {
            return Err(Error::argument(format!("cost {c} outside [0, 1]")));
        }
        self.0.copy_from_slice(costs);
        Ok(())
    }

    pub(crate) fn set_unit(&mut self, arm: usize) {
        self.0.iter_mut().for_each(|c| *c = 0.0);
        self.0[arm] = 1.0;
    }

    pub(crate) fn slots(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

pub(crate) fn is_unit_cost(c: f64) -> bool {
    (0.0..=1.0).contains(&c)
}

/// What happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    pub distribution: Vec<f64>,
    pub chosen: usize,
    pub costs: CostVector,
    pub incurred: f64,
}

impl RoundRecord {
    pub fn validate(&self) -> Result<()> {
        if !is_strict_distribution(&self.distribution, 1e-12) {
            return Err(Error::Protocol(format!(
                "round {}: distribution is not a strictly positive probability vector",
                self.round
            )));
        }
        if self.chosen >= self.costs.arms() || self.costs.get(self.chosen) != self.incurred {
            return Err(Error::Protocol(format!(
                "round {}: incurred cost does not match the chosen arm",
                self.round
            )));
        }
        Ok(())
    }
}

/// Running per-arm and gambler cost totals.
///
/// Per-arm regret `R_j = gambler total - arm j total` is always taken as a
/// difference of the two running sums.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretLedger {
    params: GameParams,
    arm_totals: Vec<f64>,
    gambler_total: f64,
    rounds: usize,
}

impl RegretLedger {
    pub fn new(params: GameParams) -> Self {
        Self {
            params,
            arm_totals: vec![0.0; params.arms()],
            gambler_total: 0.0,
            rounds: 0,
        }
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn is_complete(&self) -> bool {
        self.rounds == self.params.horizon()
    }

    pub fn arm_totals(&self) -> &[f64] {
        &self.arm_totals
    }

    pub fn gambler_total(&self) -> f64 {
        self.gambler_total
    }

    /// Account for one round in which `chosen` was pulled against `costs`.
    pub fn record(&mut self, costs: &CostVector, chosen: usize) -> Result<()> {
        if costs.arms() != self.params.arms() {
            return Err(Error::argument("cost vector length does not match arm count"));
        }
        self.params.check_arm(chosen)?;
        if self.is_complete() {
            return Err(Error::State("ledger already holds the full horizon".into()));
        }
        for (total, &c) in self.arm_totals.iter_mut().zip(costs.as_slice()) {
            *total += c;
        }
        self.gambler_total += costs.get(chosen);
        self.rounds += 1;
        Ok(())
    }

    /// Regret with respect to `arm` after the rounds recorded so far.
    pub fn regret_against(&self, arm: usize) -> Result<f64> {
        self.params.check_arm(arm)?;
        Ok(self.gambler_total - self.arm_totals[arm])
    }

    /// `max_j R_j` after the rounds recorded so far, with the lowest maximizing arm.
    pub fn current_max(&self) -> (usize, f64) {
        let mut best = (0, self.gambler_total - self.arm_totals[0]);
        for (j, total) in self.arm_totals.iter().enumerate().skip(1) {
            let r = self.gambler_total - total;
            if r > best.1 {
                best = (j, r);
            }
        }
        best
    }

    /// The game's regret `R = max_j R_j^T`; requires the whole horizon.
    pub fn final_regret(&self) -> Result<f64> {
        if !self.is_complete() {
            return Err(Error::State(format!(
                "ledger holds {} of {} rounds",
                self.rounds,
                self.params.horizon()
            )));
        }
        Ok(self.current_max().1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(c: &[f64]) -> CostVector {
        CostVector::new(c.to_vec()).unwrap()
    }

    fn play(arms: usize, rounds: &[(&[f64], usize)]) -> RegretLedger {
        let mut ledger = RegretLedger::new(GameParams::new(arms, rounds.len()).unwrap());
        for (c, m) in rounds {
            ledger.record(&cv(c), *m).unwrap();
        }
        ledger
    }

    #[test]
    fn params_validation() {
        assert!(GameParams::new(1, 10).is_err());
        assert!(GameParams::new(2, 0).is_err());
        assert!(GameParams::new(2, 1).is_ok());
    }

    #[test]
    fn cost_vector_range() {
        assert!(CostVector::new(vec![0.0, 1.0]).is_ok());
        assert!(CostVector::new(vec![0.0, 1.5]).is_err());
        assert!(CostVector::new(vec![-0.1, 0.5]).is_err());
        assert!(CostVector::new(vec![f64::NAN, 0.5]).is_err());
        assert_eq!(CostVector::unit(3, 1).as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn zero_costs_give_zero_regret() {
        let l = play(2, &[(&[0.0, 0.0], 0), (&[0.0, 0.0], 1)]);
        assert_eq!(l.regret_against(0).unwrap(), 0.0);
        assert_eq!(l.regret_against(1).unwrap(), 0.0);
        assert_eq!(l.final_regret().unwrap(), 0.0);
    }

    #[test]
    fn single_round_regret() {
        let l = play(2, &[(&[0.0, 1.0], 1)]);
        assert_eq!(l.regret_against(0).unwrap(), 1.0);
    }

    #[test]
    fn three_rounds_against_arm_two() {
        let e1: &[f64] = &[1.0, 0.0];
        let l = play(2, &[(e1, 0), (e1, 1), (e1, 1)]);
        assert_eq!(l.regret_against(1).unwrap(), 1.0);
    }

    #[test]
    fn final_regret_examples() {
        let l = play(2, &[(&[1.0, 0.0], 0), (&[1.0, 0.0], 0)]);
        assert_eq!(l.final_regret().unwrap(), 2.0);
        let l = play(2, &[(&[1.0, 0.0], 0), (&[0.0, 1.0], 1)]);
        assert_eq!(l.final_regret().unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        let mut l = RegretLedger::new(GameParams::new(2, 2).unwrap());
        assert!(matches!(l.regret_against(2), Err(Error::Argument(_))));
        l.record(&cv(&[0.0, 1.0]), 0).unwrap();
        assert!(matches!(l.final_regret(), Err(Error::State(_))));
        l.record(&cv(&[0.0, 1.0]), 0).unwrap();
        assert!(matches!(l.record(&cv(&[0.0, 1.0]), 0), Err(Error::State(_))));
    }

    #[test]
    fn ties_report_lowest_arm() {
        let l = play(3, &[(&[0.0, 0.0, 0.0], 2)]);
        assert_eq!(l.current_max(), (0, 0.0));
    }

    #[test]
    fn round_record_validation() {
        let ok = RoundRecord {
            round: 1,
            distribution: vec![0.25, 0.75],
            chosen: 1,
            costs: cv(&[1.0, 0.5]),
            incurred: 0.5,
        };
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.incurred = 1.0;
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.distribution = vec![1.0, 0.0];
        assert!(bad.validate().is_err());
    }

    fn trace_strategy() -> impl Strategy<Value = (usize, Vec<(Vec<f64>, usize)>)> {
        (2usize..5).prop_flat_map(|k| {
            let round = (proptest::collection::vec(0.0f64..=1.0, k), 0..k);
            (Just(k), proptest::collection::vec(round, 1..30))
        })
    }

    proptest! {
        #[test]
        fn ledger_matches_from_scratch((k, rounds) in trace_strategy()) {
            let t = rounds.len();
            let mut ledger = RegretLedger::new(GameParams::new(k, t).unwrap());
            let mut prev: Vec<f64> = vec![0.0; k];
            for (c, m) in &rounds {
                ledger.record(&CostVector::new(c.clone()).unwrap(), *m).unwrap();
                for (j, p) in prev.iter_mut().enumerate() {
                    let now = ledger.regret_against(j).unwrap();
                    prop_assert!((now - (*p + c[*m] - c[j])).abs() <= 1e-9);
                    prop_assert!(now.abs() <= ledger.rounds() as f64 + 1e-9);
                    *p = now;
                }
            }
            let mut max = f64::NEG_INFINITY;
            for j in 0..k {
                let scratch: f64 = rounds.iter().map(|(c, m)| c[*m] - c[j]).sum();
                let r = ledger.regret_against(j).unwrap();
                prop_assert!((r - scratch).abs() <= 1e-9);
                max = max.max(r);
            }
            let fin = ledger.final_regret().unwrap();
            prop_assert_eq!(fin, max);
            prop_assert!(fin >= -(t as f64) && fin <= t as f64);
        }
    }
}
