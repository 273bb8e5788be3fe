use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default maximum number of pure strategies per side.
pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameClass {
    /// Costs may depend on the gambler's earlier arms.
    Adaptive,
    /// Costs are a fixed sequence.
    NonAdaptive,
}

impl GameClass {
    pub fn name(self) -> &'static str {
        match self {
            GameClass::Adaptive => "adaptive",
            GameClass::NonAdaptive => "nonadaptive",
        }
    }
}

/// Cost levels available to the adversary, sorted and distinct in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostAlphabet(Vec<f64>);

impl CostAlphabet {
    pub fn binary() -> Self {
        Self(vec![0.0, 1.0])
    }

    pub fn new(mut levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() || levels.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::argument("cost levels must be a nonempty subset of [0, 1]"));
        }
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        Ok(Self(levels))
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A `K`-armed, `T`-round game with a finite cost alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct TinyGame {
    arms: usize,
    horizon: usize,
    class: GameClass,
    alphabet: CostAlphabet,
    /// Start of each round's block of gambler information sets.
    gambler_offsets: Vec<usize>,
    /// Start of each round's block of adversary decision points.
    adversary_offsets: Vec<usize>,
}

fn checked_pow(base: u128, exp: u128) -> Option<u128> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// `sum_{t < horizon} base^t`, or `None` on overflow.
fn geometric(base: u128, horizon: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for t in 0..horizon {
        total = total.checked_add(term)?;
        if t + 1 < horizon {
            term = term.checked_mul(base)?;
        }
    }
    Some(total)
}

impl TinyGame {
    pub fn new(arms: usize, horizon: usize, class: GameClass) -> Result<Self> {
        Self::with_alphabet(arms, horizon, class, CostAlphabet::binary())
    }

    pub fn with_alphabet(arms: usize, horizon: usize, class: GameClass, alphabet: CostAlphabet) -> Result<Self> {
        if arms < 2 || arms > u8::MAX as usize {
            return Err(Error::argument(format!("arm count {arms} out of range")));
        }
        if horizon < 1 {
            return Err(Error::argument("horizon must be at least 1"));
        }
        let mut game = Self {
            arms,
            horizon,
            class,
            alphabet,
            gambler_offsets: Vec::new(),
            adversary_offsets: Vec::new(),
        };
        // Offsets are only materialized when the layout fits in memory; the
        // enumeration caps reject anything larger before they are used.
        if let Some(n) = game.gambler_info_sets() {
            if n <= u32::MAX as u128 {
                game.gambler_offsets = offsets((arms * game.alphabet.len()) as u128, horizon);
            }
        }
        if let Some(n) = game.adversary_decision_points() {
            if n <= u32::MAX as u128 {
                game.adversary_offsets = match class {
                    GameClass::Adaptive => offsets(arms as u128, horizon),
                    GameClass::NonAdaptive => (0..horizon).collect(),
                };
            }
        }
        Ok(game)
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn class(&self) -> GameClass {
        self.class
    }

    pub fn alphabet(&self) -> &CostAlphabet {
        &self.alphabet
    }

    fn cost_vectors(&self) -> u128 {
        (self.alphabet.len() as u128).pow(self.arms as u32)
    }

    /// Information sets: one per (own arms, observed costs) history, per round.
    pub fn gambler_info_sets(&self) -> Option<u128> {
        geometric((self.arms * self.alphabet.len()) as u128, self.horizon)
    }

    pub fn adversary_decision_points(&self) -> Option<u128> {
        match self.class {
            GameClass::Adaptive => geometric(self.arms as u128, self.horizon),
            GameClass::NonAdaptive => Some(self.horizon as u128),
        }
    }

    /// `K^(information sets)`, or `None` on overflow.
    pub fn gambler_count(&self) -> Option<u128> {
        checked_pow(self.arms as u128, self.gambler_info_sets()?)
    }

    pub fn adversary_count(&self) -> Option<u128> {
        checked_pow(self.cost_vectors(), self.adversary_decision_points()?)
    }

    /// Round (1-based) and observed `(arm, cost)` history of gambler
    /// information set `index`.
    pub fn describe_info_set(&self, index: usize) -> (usize, Vec<(usize, f64)>) {
        let l = self.alphabet.len();
        let round = self.gambler_offsets.partition_point(|&o| o <= index);
        let mut code = index - self.gambler_offsets[round - 1];
        let history = (1..round)
            .map(|_| {
                let d = code % (self.arms * l);
                code /= self.arms * l;
                (d / l, self.alphabet.levels()[d % l])
            })
            .collect();
        (round, history)
    }

    /// Round (1-based) and the gambler's earlier arms that adversary decision
    /// point `index` responds to (always empty for the non-adaptive class).
    pub fn describe_decision_point(&self, index: usize) -> (usize, Vec<usize>) {
        match self.class {
            GameClass::NonAdaptive => (index + 1, Vec::new()),
            GameClass::Adaptive => {
                let round = self.adversary_offsets.partition_point(|&o| o <= index);
                let mut code = index - self.adversary_offsets[round - 1];
                let history = (1..round)
                    .map(|_| {
                        let arm = code % self.arms;
                        code /= self.arms;
                        arm
                    })
                    .collect();
                (round, history)
            }
        }
    }

    /// Cost of `arm` under cost-vector index `code`.
    fn level(&self, code: u32, arm: usize) -> f64 {
        let l = self.alphabet.len() as u32;
        let digit = (code / l.pow(arm as u32)) % l;
        self.alphabet.levels()[digit as usize]
    }
}

fn offsets(base: u128, horizon: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(horizon);
    let mut start = 0usize;
    let mut block = 1usize;
    for _ in 0..horizon {
        out.push(start);
        start += block;
        block = block.saturating_mul(base as usize);
    }
    out
}

/// Arm chosen at each information set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GamblerStrategy {
    choices: Vec<u8>,
}

impl GamblerStrategy {
    pub fn choices(&self) -> &[u8] {
        &self.choices
    }
}

/// Cost-vector index at each decision point. Entry `c` sets arm `j` to level
/// `(c / L^j) mod L` of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdversaryStrategy {
    codes: Vec<u32>,
}

impl AdversaryStrategy {
    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    /// Cost vector played at decision point `index`.
    pub fn cost_vector(&self, game: &TinyGame, index: usize) -> Vec<f64> {
        (0..game.arms).map(|j| game.level(self.codes[index], j)).collect()
    }
}

fn cap_check(what: &'static str, count: Option<u128>, cap: u128) -> Result<usize> {
    match count {
        Some(n) if n <= cap => Ok(n as usize),
        _ => Err(Error::Size { what, count, cap }),
    }
}

/// Mixed-radix digits of `n`, least significant first.
fn digits(mut n: u128, radix: u128, len: usize) -> impl Iterator<Item = u128> {
    (0..len).map(move |_| {
        let d = n % radix;
        n /= radix;
        d
    })
}

pub fn enumerate_gambler(game: &TinyGame, cap: u128) -> Result<Vec<GamblerStrategy>> {
    let count = cap_check("gambler strategies", game.gambler_count(), cap)?;
    let sets = game.gambler_info_sets().unwrap_or(0) as usize;
    Ok((0..count as u128)
        .map(|n| GamblerStrategy {
            choices: digits(n, game.arms as u128, sets).map(|d| d as u8).collect(),
        })
        .collect())
}

pub fn enumerate_adversary(game: &TinyGame, cap: u128) -> Result<Vec<AdversaryStrategy>> {
    let count = cap_check("adversary strategies", game.adversary_count(), cap)?;
    let points = game.adversary_decision_points().unwrap_or(0) as usize;
    let radix = game.cost_vectors();
    Ok((0..count as u128)
        .map(|n| AdversaryStrategy {
            codes: digits(n, radix, points).map(|d| d as u32).collect(),
        })
        .collect())
}

/// Regret of one deterministic play.
pub fn pure_payoff(game: &TinyGame, gambler: &GamblerStrategy, adversary: &AdversaryStrategy) -> f64 {
    let k = game.arms;
    let l = game.alphabet.len();
    let mut info = 0usize;
    let mut info_scale = 1usize;
    let mut hist = 0usize;
    let mut hist_scale = 1usize;
    let mut incurred = 0.0;
    let mut totals = vec![0.0; k];
    for t in 0..game.horizon {
        let arm = gambler.choices[game.gambler_offsets[t] + info] as usize;
        let code = match game.class {
            GameClass::Adaptive => adversary.codes[game.adversary_offsets[t] + hist],
            GameClass::NonAdaptive => adversary.codes[t],
        };
        for (j, total) in totals.iter_mut().enumerate() {
            *total += game.level(code, j);
        }
        let level = (code as usize / l.pow(arm as u32)) % l;
        incurred += game.alphabet.levels()[level];
        info += (arm * l + level) * info_scale;
        info_scale *= k * l;
        hist += arm * hist_scale;
        hist_scale *= k;
    }
    incurred - totals.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Regrets of every pure gambler (rows) against every pure adversary (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl PayoffMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::argument("payoff matrix shape mismatch"));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::argument("payoff matrix has non-finite entries"));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn build(game: &TinyGame, gamblers: &[GamblerStrategy], adversaries: &[AdversaryStrategy]) -> Result<Self> {
        let mut entries = Vec::with_capacity(gamblers.len() * adversaries.len());
        for g in gamblers {
            entries.extend(adversaries.iter().map(|a| pure_payoff(game, g, a)));
        }
        Self::from_entries(gamblers.len(), adversaries.len(), entries)
    }

    /// Enumerate both sides under `cap` and build the matrix.
    pub fn for_game(game: &TinyGame, cap: u128) -> Result<Self> {
        let gamblers = enumerate_gambler(game, cap)?;
        let adversaries = enumerate_adversary(game, cap)?;
        Self::build(game, &gamblers, &adversaries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn game(k: usize, t: usize, class: GameClass) -> TinyGame {
        TinyGame::new(k, t, class).unwrap()
    }

    #[test]
    fn gambler_counts() {
        assert_eq!(enumerate_gambler(&game(2, 1, GameClass::Adaptive), DEFAULT_CAP).unwrap().len(), 2);
        let g = enumerate_gambler(&game(2, 2, GameClass::Adaptive), DEFAULT_CAP).unwrap();
        assert_eq!(g.len(), 32);
        assert_eq!(g.iter().collect::<HashSet<_>>().len(), 32);
        let big = game(2, 3, GameClass::Adaptive);
        assert_eq!(big.gambler_count(), Some(2_097_152));
        match enumerate_gambler(&big, DEFAULT_CAP) {
            Err(Error::Size { count, cap, .. }) => {
                assert_eq!(count, Some(2_097_152));
                assert_eq!(cap, DEFAULT_CAP);
            }
            other => panic!("expected size error, got {other:?}"),
        }
        assert!(game(2, 40, GameClass::Adaptive).gambler_count().is_none());
        assert!(matches!(
            enumerate_gambler(&game(2, 40, GameClass::Adaptive), DEFAULT_CAP),
            Err(Error::Size { count: None, .. })
        ));
    }

    #[test]
    fn adversary_counts() {
        for class in [GameClass::Adaptive, GameClass::NonAdaptive] {
            assert_eq!(enumerate_adversary(&game(2, 1, class), DEFAULT_CAP).unwrap().len(), 4);
        }
        let a = enumerate_adversary(&game(2, 2, GameClass::Adaptive), DEFAULT_CAP).unwrap();
        assert_eq!(a.len(), 64);
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 64);
        assert_eq!(enumerate_adversary(&game(2, 2, GameClass::NonAdaptive), DEFAULT_CAP).unwrap().len(), 16);
        assert!(enumerate_adversary(&game(2, 2, GameClass::Adaptive), 63).is_err());
    }

    fn find_gambler(game: &TinyGame, f: impl Fn(&GamblerStrategy) -> bool) -> GamblerStrategy {
        enumerate_gambler(game, DEFAULT_CAP).unwrap().into_iter().find(f).unwrap()
    }

    #[test]
    fn zero_adversary_pays_nothing() {
        let g = game(2, 2, GameClass::Adaptive);
        let zero = enumerate_adversary(&g, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .find(|a| a.codes().iter().all(|&c| c == 0))
            .unwrap();
        for gs in enumerate_gambler(&g, DEFAULT_CAP).unwrap() {
            assert_eq!(pure_payoff(&g, &gs, &zero), 0.0);
        }
    }

    #[test]
    fn one_round_unit_cost() {
        let g = game(2, 1, GameClass::NonAdaptive);
        // code 1 sets arm 1 to level 1: costs (1, 0)
        let adv = AdversaryStrategy { codes: vec![1] };
        assert_eq!(adv.cost_vector(&g, 0), vec![1.0, 0.0]);
        let pick_first = find_gambler(&g, |s| s.choices()[0] == 0);
        assert_eq!(pure_payoff(&g, &pick_first, &adv), 1.0);
    }

    #[test]
    fn hand_traced_two_round_play() {
        let g = game(2, 2, GameClass::Adaptive);
        // Decision points: [round 1], [round 2 after arm 1, round 2 after arm 2].
        // e_1 = code 1, e_2 = code 2.
        let adv = AdversaryStrategy { codes: vec![1, 1, 2] };
        // Information sets in round 2 are indexed by arm * 2 + observed level:
        // (arm 1, cost 0), (arm 1, cost 1), (arm 2, cost 0), (arm 2, cost 1).
        let gambler = GamblerStrategy { choices: vec![0, 0, 1, 0, 0] };
        assert_eq!(pure_payoff(&g, &gambler, &adv), 1.0);
    }

    #[test]
    fn descriptions_follow_the_layout() {
        let g = game(2, 2, GameClass::Adaptive);
        assert_eq!(g.describe_info_set(0), (1, vec![]));
        assert_eq!(g.describe_info_set(1), (2, vec![(0, 0.0)]));
        assert_eq!(g.describe_info_set(2), (2, vec![(0, 1.0)]));
        assert_eq!(g.describe_info_set(4), (2, vec![(1, 1.0)]));
        assert_eq!(g.describe_decision_point(0), (1, vec![]));
        assert_eq!(g.describe_decision_point(2), (2, vec![1]));
        let g = game(2, 3, GameClass::NonAdaptive);
        assert_eq!(g.describe_decision_point(2), (3, vec![]));
    }

    #[test]
    fn matrix_entries_are_bounded_integers() {
        for class in [GameClass::Adaptive, GameClass::NonAdaptive] {
            let g = game(2, 2, class);
            let m = PayoffMatrix::for_game(&g, DEFAULT_CAP).unwrap();
            assert!(m.entries().iter().all(|&x| (-2.0..=2.0).contains(&x) && x.fract() == 0.0));
        }
    }

    #[test]
    fn ternary_alphabet_counts() {
        let alphabet = CostAlphabet::new(vec![1.0, 0.0, 0.5, 0.5]).unwrap();
        assert_eq!(alphabet.levels(), &[0.0, 0.5, 1.0]);
        let g = TinyGame::with_alphabet(2, 2, GameClass::Adaptive, alphabet).unwrap();
        assert_eq!(g.gambler_count(), Some(128));
        assert_eq!(g.adversary_count(), Some(729));
    }
}
