//! Regret-minimization laboratory for the adversarial multi-armed bandit.
//!
//! The crate is `no_std` (with `alloc`) and contains only pure computation:
//!
//! * [`model`]: game parameters, cost vectors, round records and the regret ledger.
//! * [`policies`]: the Accounts gambler, Exp3, Hedge and a uniform baseline.
//! * [`adversaries`]: fixed, stochastic and threshold-adaptive cost schedules.
//! * [`engine`]: episode protocol, invariant checking, Monte Carlo summaries,
//!   tail bounds and log-log slope fits.
//! * [`minimax`]: exact expected-regret game values for tiny games.
//!
//! All transcendental functions go through `libm`, so results are bit-identical
//! across platforms and thread counts.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversaries;
pub mod engine;
mod error;
pub mod minimax;
pub mod model;
pub mod numeric;
pub mod policies;
pub mod rng;

pub use error::{Error, Invariant, InvariantViolation, Result};
pub use model::{CostVector, GameParams, RegretLedger, RoundRecord};
