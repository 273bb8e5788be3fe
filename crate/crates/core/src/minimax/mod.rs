//! Exact minimax expected regret for tiny bandit games.
//!
//! Both players are enumerated as pure strategies: the gambler as a
//! behavioral plan over information sets (own past arms and the costs it
//! observed), the adversary as cost vectors indexed by the gambler's past arms
//! (adaptive) or by round alone (non-adaptive). A pure-vs-pure play is
//! deterministic, so the payoff matrix holds exact regrets, and the game value
//! follows from a linear program with a duality-gap certificate.

mod game;
mod solver;

pub use game::{
    enumerate_adversary, enumerate_gambler, pure_payoff, AdversaryStrategy, CostAlphabet,
    GameClass, GamblerStrategy, PayoffMatrix, TinyGame, DEFAULT_CAP,
};
pub use solver::{certify, game_value, self_play, GameSolution, GAP_TARGET};
