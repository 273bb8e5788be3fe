use std::cell::RefCell;
use std::rc::Rc;

use rand_core::RngCore;
use regretlab_core::adversaries::{Adversary, AnyAdversary, FixedSequence, RoundContext};
use regretlab_core::engine::{
    play, run_episode, run_monte_carlo, AdversarySpec, AlphaSpec, ExperimentConfig, FixedPattern, NoopObserver,
    PolicySpec, Rate, RunTrace, Verbosity,
};
use regretlab_core::policies::{Accounts, AccountsOverrides, Hedge};
use regretlab_core::rng::{substream, unit_f64, Role};
use regretlab_core::{CostVector, GameParams, Result};

fn config(k: usize, t: usize, policy: PolicySpec, adversary: AdversarySpec, n: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        params: GameParams::new(k, t).unwrap(),
        policy,
        adversary,
        replications: n,
        seed,
        verbosity: Verbosity::None,
        checked: true,
    }
}

fn accounts() -> PolicySpec {
    PolicySpec::Accounts(AccountsOverrides::default())
}

#[test]
fn zero_costs_leave_accounts_untouched() {
    let cfg = config(3, 500, accounts(), AdversarySpec::Fixed(FixedPattern::Zero), 1, 9);
    let out = run_episode(&cfg.instance().unwrap(), 0, &mut NoopObserver).unwrap();
    assert_eq!(out.regret, 0.0);
    let (estimates, accounts) = out.accounts_state.unwrap();
    assert!(estimates.iter().chain(&accounts).all(|&x| x == 0.0));
}

#[test]
fn uniform_against_first_arm_golden() {
    let cfg = config(
        2,
        1000,
        PolicySpec::Uniform,
        AdversarySpec::Fixed(FixedPattern::Cyclic(vec![vec![1.0, 0.0]])),
        1,
        42,
    );
    let out = run_episode(&cfg.instance().unwrap(), 0, &mut NoopObserver).unwrap();
    let pulls = out.ledger.gambler_total();
    assert_eq!(out.regret, pulls);
    assert_eq!(out.regret, GOLDEN_UNIFORM);
}

// Frozen from one run; the expectation is 500.
const GOLDEN_UNIFORM: f64 = 483.0;

#[test]
fn accounts_threshold_trace_is_reproducible() {
    let cfg = config(2, 100, accounts(), AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.1) }, 1, 42);
    let inst = cfg.instance().unwrap();
    let a = RunTrace::record(&inst, 0, Verbosity::Full).unwrap();
    let b = RunTrace::record(&cfg.instance().unwrap(), 0, Verbosity::Full).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rounds.len(), 100);
    let bits: Vec<u64> = a.rounds.iter().flat_map(|r| r.distribution.iter().map(|p| p.to_bits())).collect();
    let digest = bits.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &x| (h ^ x).wrapping_mul(0x100_0000_01b3));
    assert_eq!((a.regret(), digest), GOLDEN_THRESHOLD);
}

const GOLDEN_THRESHOLD: (f64, u64) = (15.0, 2_721_459_709_315_751_424);

/// Records the call order of adversary and gambler RNG.
struct Probe {
    params: GameParams,
    log: Rc<RefCell<Vec<&'static str>>>,
}

impl Adversary for Probe {
    fn params(&self) -> GameParams {
        self.params
    }

    fn is_adaptive(&self) -> bool {
        true
    }

    fn fill_costs(&mut self, ctx: RoundContext<'_>, _rng: &mut dyn RngCore, costs: &mut CostVector) -> Result<()> {
        assert_eq!(ctx.history.len(), ctx.round - 1);
        self.log.borrow_mut().push("costs");
        costs.set_all(&[0.5, 0.25])
    }
}

struct LoggingRng {
    inner: rand_chacha::ChaCha8Rng,
    log: Rc<RefCell<Vec<&'static str>>>,
}

impl RngCore for LoggingRng {
    fn next_u32(&mut self) -> u32 {
        self.log.borrow_mut().push("sample");
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.log.borrow_mut().push("sample");
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.log.borrow_mut().push("sample");
        self.inner.fill_bytes(dst)
    }
}

#[test]
fn adversary_commits_before_the_arm_is_sampled() {
    let params = GameParams::new(2, 50).unwrap();
    let log = Rc::new(RefCell::new(Vec::new()));
    let mut adversary = Probe { params, log: log.clone() };
    let mut gambler_rng = LoggingRng {
        inner: substream(3, 0, Role::Gambler),
        log: log.clone(),
    };
    let mut adversary_rng = substream(3, 0, Role::Adversary);
    let mut policy = Accounts::new(params);
    play(params, &mut policy, &mut adversary, &mut gambler_rng, &mut adversary_rng, true, &mut NoopObserver).unwrap();
    let log = log.borrow();
    assert_eq!(log.len(), 100);
    for pair in log.chunks(2) {
        assert_eq!(pair, ["costs", "sample"]);
    }
}

#[test]
fn monte_carlo_with_one_replication_is_the_episode() {
    let cfg = config(2, 300, accounts(), AdversarySpec::Biased { epsilon: None }, 1, 5);
    let inst = cfg.instance().unwrap();
    let (stats, _) = run_monte_carlo(&inst).unwrap();
    let single = run_episode(&inst, 0, &mut NoopObserver).unwrap();
    assert_eq!(stats.mean, single.regret);
    assert_eq!(stats.min, single.regret);
    assert_eq!(stats.max, single.regret);
    assert_eq!(stats.quantile(0.99), single.regret);
}

#[test]
fn fair_coins_match_a_direct_resampling_oracle() {
    let (k, t, n) = (3, 200, 400);
    let cfg = config(
        k,
        t,
        PolicySpec::Uniform,
        AdversarySpec::Stochastic { means: vec![0.5; k] },
        n,
        11,
    );
    let (stats, _) = run_monte_carlo(&cfg.instance().unwrap()).unwrap();

    // Oracle: a uniform gambler's regret is its own coin count minus the
    // smallest arm total; simulate it without any policy machinery.
    let mut rng = substream(0xdead_beef, 0, Role::Instance);
    let mut oracle = Vec::with_capacity(n as usize);
    for _ in 0..4000 {
        let mut totals = vec![0.0; k];
        let mut incurred = 0.0;
        for _ in 0..t {
            let costs: Vec<f64> = (0..k).map(|_| if unit_f64(&mut rng) < 0.5 { 1.0 } else { 0.0 }).collect();
            let arm = (unit_f64(&mut rng) * k as f64) as usize;
            incurred += costs[arm];
            for (tot, c) in totals.iter_mut().zip(&costs) {
                *tot += c;
            }
        }
        oracle.push(incurred - totals.iter().copied().fold(f64::INFINITY, f64::min));
    }
    let m = oracle.iter().sum::<f64>() / oracle.len() as f64;
    let var = oracle.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (oracle.len() - 1) as f64;
    let se = (stats.std_error().powi(2) + var / oracle.len() as f64).sqrt();
    assert!((stats.mean - m).abs() <= 3.0 * se, "engine {} vs oracle {m} (se {se})", stats.mean);
}

#[test]
fn accounts_estimates_are_unbiased_on_a_fixed_sequence() {
    let (k, t, n) = (3, 300, 600);
    let cfg = config(k, t, accounts(), AdversarySpec::Fixed(FixedPattern::Random), n, 21);
    let inst = cfg.instance().unwrap();
    let truth = match &inst.adversary {
        AnyAdversary::Fixed(f) => f.arm_totals(),
        _ => unreachable!(),
    };
    let (_, outcomes) = run_monte_carlo(&inst).unwrap();
    for j in 0..k {
        let xs: Vec<f64> = outcomes
            .iter()
            .map(|o| {
                let (c, a) = o.accounts_state.as_ref().unwrap();
                c[j] + a[j]
            })
            .collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let se = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64 / n as f64).sqrt();
        assert!((m - truth[j]).abs() <= 4.0 * se, "arm {j}: {m} vs {}", truth[j]);
    }
}

#[test]
fn checked_soak_has_no_violations() {
    let adversaries = [
        AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.05) },
        AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.3) },
        AdversarySpec::Biased { epsilon: None },
        AdversarySpec::Fixed(FixedPattern::Random),
        AdversarySpec::Fixed(FixedPattern::Cyclic(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])),
    ];
    for (i, adversary) in adversaries.into_iter().enumerate() {
        let cfg = config(2, 20_000, accounts(), adversary, 1, 100 + i as u64);
        let out = run_episode(&cfg.instance().unwrap(), 0, &mut NoopObserver).unwrap();
        assert!(out.checks > 0);
    }
}

#[test]
fn exp3_threshold_drift_is_checked() {
    let rate = Rate { coef: 1.0, exponent: -0.5 };
    let cfg = config(
        2,
        4096,
        PolicySpec::Exp3 { gamma: rate, eta: rate },
        AdversarySpec::Threshold { alpha: AlphaSpec::GammaMultiple(3.0) },
        1,
        8,
    );
    let out = run_episode(&cfg.instance().unwrap(), 0, &mut NoopObserver).unwrap();
    assert_eq!(out.checks, 4096);
}

#[test]
fn full_information_policy_sees_the_whole_vector() {
    let params = GameParams::new(2, 10).unwrap();
    let mut policy = Hedge::new(params, 0.5).unwrap();
    let mut adversary = FixedSequence::cyclic(params, &[CostVector::unit(2, 0)]).unwrap();
    let mut g = substream(1, 0, Role::Gambler);
    let mut a = substream(1, 0, Role::Adversary);
    play(params, &mut policy, &mut adversary, &mut g, &mut a, false, &mut NoopObserver).unwrap();
    // Every round charged arm 1, whichever arm was pulled.
    assert_eq!(policy.totals(), &[10.0, 0.0]);
}
