//! Minimax report for tiny games.

use regretlab_core::minimax::{
    enumerate_adversary, enumerate_gambler, game_value, CostAlphabet, GameClass, PayoffMatrix, TinyGame,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::LabResult;

/// Probabilities below this are left out of the strategy listings.
const SUPPORT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct GamblerMove {
    pub round: usize,
    /// Earlier `(arm, observed cost)` pairs, arms 1-based.
    pub observed: Vec<(usize, f64)>,
    pub arm: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryMove {
    pub round: usize,
    /// Earlier gambler arms, 1-based; empty for the non-adaptive class.
    pub after_arms: Vec<usize>,
    pub costs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Weighted<T> {
    pub probability: f64,
    pub plan: Vec<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimaxReport {
    pub config_digest: String,
    #[serde(rename = "K")]
    pub arms: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub class: &'static str,
    pub alphabet: Vec<f64>,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub n_gambler: usize,
    pub n_adversary: usize,
    /// Wall-clock solve time; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub seconds: f64,
    pub gambler_support: Vec<Weighted<GamblerMove>>,
    pub adversary_support: Vec<Weighted<AdversaryMove>>,
}

#[derive(Serialize)]
struct Invocation<'a> {
    arms: usize,
    horizon: usize,
    class: &'a str,
    alphabet: &'a [f64],
    cap: u128,
}

pub fn solve(arms: usize, horizon: usize, class: GameClass, alphabet: CostAlphabet, cap: u128) -> LabResult<MinimaxReport> {
    let start = std::time::Instant::now();
    let game = TinyGame::with_alphabet(arms, horizon, class, alphabet)?;
    let gamblers = enumerate_gambler(&game, cap)?;
    let adversaries = enumerate_adversary(&game, cap)?;
    let matrix = PayoffMatrix::build(&game, &gamblers, &adversaries)?;
    let sol = game_value(&matrix)?;
    let seconds = start.elapsed().as_secs_f64();

    let gambler_support = gamblers
        .iter()
        .zip(&sol.gambler)
        .filter(|(_, &p)| p > SUPPORT_EPS)
        .map(|(g, &probability)| Weighted {
            probability,
            plan: g
                .choices()
                .iter()
                .enumerate()
                .map(|(i, &arm)| {
                    let (round, observed) = game.describe_info_set(i);
                    GamblerMove {
                        round,
                        observed: observed.into_iter().map(|(a, c)| (a + 1, c)).collect(),
                        arm: arm as usize + 1,
                    }
                })
                .collect(),
        })
        .collect();
    let adversary_support = adversaries
        .iter()
        .zip(&sol.adversary)
        .filter(|(_, &p)| p > SUPPORT_EPS)
        .map(|(a, &probability)| Weighted {
            probability,
            plan: (0..a.codes().len())
                .map(|i| {
                    let (round, arms) = game.describe_decision_point(i);
                    AdversaryMove {
                        round,
                        after_arms: arms.into_iter().map(|a| a + 1).collect(),
                        costs: a.cost_vector(&game, i),
                    }
                })
                .collect(),
        })
        .collect();

    let invocation = Invocation {
        arms,
        horizon,
        class: class.name(),
        alphabet: game.alphabet().levels(),
        cap,
    };
    let digest = hex::encode(Sha256::digest(serde_json::to_vec(&invocation).expect("serializes")));
    Ok(MinimaxReport {
        config_digest: digest,
        arms,
        horizon,
        class: class.name(),
        alphabet: game.alphabet().levels().to_vec(),
        value: sol.value,
        lower: sol.lower,
        upper: sol.upper,
        gap: sol.gap,
        n_gambler: gamblers.len(),
        n_adversary: adversaries.len(),
        seconds,
        gambler_support,
        adversary_support,
    })
}
