//! The acceptance suite behind `regretlab verify`.
//!
//! Each criterion returns an [`Outcome`]; Monte Carlo sweeps shared by several
//! criteria are computed once per [`Suite`].

use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use regretlab_core::adversaries::AnyAdversary;
use regretlab_core::engine::{
    slope_fit, tail_bound, AdversarySpec, AlphaSpec, ExperimentConfig, FixedPattern, PolicySpec, Rate,
    SummaryStats, Verbosity,
};
use regretlab_core::minimax::{CostAlphabet, GameClass, DEFAULT_CAP};
use regretlab_core::policies::AccountsOverrides;
use regretlab_core::GameParams;

use crate::config::{ConfigFile, Overrides};
use crate::error::{LabError, LabResult};
use crate::minimax::solve;
use crate::montecarlo::run_batch;
use crate::report::Summary;

/// `T = 2^10 .. 2^16`.
pub const HORIZONS: [usize; 7] = [1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16];
pub const SWEEP_REPS: u64 = 200;
pub const TAIL_REPS: u64 = 1000;
pub const ACCOUNTS_ALPHAS: [f64; 3] = [0.05, 0.1, 0.2];
pub const SOAK_ROUNDS: usize = 1_000_000;

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "minimax values"),
    (2, "exp3 separation slope"),
    (3, "accounts vs threshold schedule"),
    (4, "stochastic instance slope"),
    (5, "checked-mode soak"),
    (6, "estimate unbiasedness"),
    (7, "threshold drift direction"),
    (8, "determinism across workers"),
    (9, "tail bound"),
];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Worker threads for Monte Carlo batches; 0 uses all cores.
    pub workers: usize,
    /// Tail-bound parameters for criterion 9; each must exceed 1.
    pub tail_alphas: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 20_060_101,
            workers: 0,
            tail_alphas: vec![2.0, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] criterion {} ({}): {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
struct Exp3Point {
    horizon: usize,
    mean: f64,
    drift_checks: u64,
}

#[derive(Debug, Clone)]
struct AccountsPoint {
    alpha: f64,
    horizon: usize,
    /// `TAIL_REPS` regrets in replication order.
    regrets: Vec<f64>,
}

pub struct Suite {
    opts: VerifyOptions,
    exp3: OnceLock<Result<Vec<Exp3Point>, String>>,
    accounts: OnceLock<Result<Vec<AccountsPoint>, String>>,
}

fn slope_in(points: &[(f64, f64)], lo: f64, hi: f64) -> LabResult<(bool, f64)> {
    let fit = slope_fit(points)?;
    Ok((fit.slope >= lo && fit.slope <= hi, fit.slope))
}

fn scale(params: GameParams) -> f64 {
    let (t, k) = (params.horizon() as f64, params.arms() as f64);
    (t * k * k.ln()).sqrt()
}

impl Suite {
    pub fn new(opts: VerifyOptions) -> Self {
        Self {
            opts,
            exp3: OnceLock::new(),
            accounts: OnceLock::new(),
        }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    fn config(&self, k: usize, t: usize, policy: PolicySpec, adversary: AdversarySpec, n: u64, checked: bool) -> ExperimentConfig {
        ExperimentConfig {
            params: GameParams::new(k, t).expect("valid game"),
            policy,
            adversary,
            replications: n,
            seed: self.opts.seed,
            verbosity: Verbosity::None,
            checked,
        }
    }

    fn batch(&self, cfg: &ExperimentConfig) -> LabResult<crate::montecarlo::Batch> {
        run_batch(&cfg.instance()?, self.opts.workers)
    }

    /// Run one criterion by number.
    pub fn run(&self, id: u8) -> Outcome {
        let (_, name) = CRITERIA
            .iter()
            .copied()
            .find(|(i, _)| *i == id)
            .unwrap_or((id, "unknown criterion"));
        let result = match id {
            1 => self.minimax(),
            2 => self.exp3_slope(),
            3 => self.accounts_threshold(),
            4 => self.stochastic_slope(),
            5 => self.soak(),
            6 => self.unbiasedness(),
            7 => self.drift(),
            8 => self.determinism(),
            9 => self.tail(),
            _ => Err(LabError::Verify(format!("no criterion {id}"))),
        };
        let (passed, detail) = result.unwrap_or_else(|e| (false, e.to_string()));
        Outcome { id, name, passed, detail }
    }

    fn minimax(&self) -> LabResult<(bool, String)> {
        let start = Instant::now();
        let adaptive = solve(2, 2, GameClass::Adaptive, CostAlphabet::binary(), DEFAULT_CAP)?;
        let oblivious = solve(2, 2, GameClass::NonAdaptive, CostAlphabet::binary(), DEFAULT_CAP)?;
        let seconds = start.elapsed().as_secs_f64();
        let ok_a = (adaptive.value - 2.0 / 3.0).abs() <= 1e-6;
        let ok_n = (oblivious.value - 0.5).abs() <= 1e-6;
        let gap = adaptive.gap.max(oblivious.gap);
        let passed = ok_a && ok_n && gap <= 1e-6 && seconds < 10.0;
        Ok((
            passed,
            format!(
                "adaptive {:.6} (target 0.666667), nonadaptive {:.6} (target 0.500000), max gap {gap:.1e}, {seconds:.2}s",
                adaptive.value, oblivious.value
            ),
        ))
    }

    fn exp3_points(&self) -> Result<&Vec<Exp3Point>, String> {
        self.exp3
            .get_or_init(|| {
                let rate = Rate { coef: 1.0, exponent: -0.5 };
                HORIZONS
                    .iter()
                    .map(|&t| {
                        let cfg = self.config(
                            2,
                            t,
                            PolicySpec::Exp3 { gamma: rate, eta: rate },
                            AdversarySpec::Threshold { alpha: AlphaSpec::GammaMultiple(3.0) },
                            SWEEP_REPS,
                            true,
                        );
                        let batch = self.batch(&cfg)?;
                        Ok(Exp3Point {
                            horizon: t,
                            mean: batch.stats.mean,
                            drift_checks: batch.outcomes.iter().map(|o| o.checks).sum(),
                        })
                    })
                    .collect::<LabResult<Vec<_>>>()
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn exp3_slope(&self) -> LabResult<(bool, String)> {
        let points = self.exp3_points().map_err(LabError::Verify)?;
        let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.horizon as f64, p.mean)).collect();
        let (passed, slope) = slope_in(&xy, 0.65, 0.85)?;
        Ok((passed, format!("slope {slope:.4} (range [0.65, 0.85]), means {}", fmt_means(&xy))))
    }

    fn drift(&self) -> LabResult<(bool, String)> {
        let points = self.exp3_points().map_err(LabError::Verify)?;
        let checks: u64 = points.iter().map(|p| p.drift_checks).sum();
        let expected: u64 = HORIZONS.iter().map(|&t| t as u64 * SWEEP_REPS).sum();
        Ok((
            checks == expected,
            format!("{checks} rounds checked of {expected}, zero violations"),
        ))
    }

    fn accounts_points(&self) -> Result<&Vec<AccountsPoint>, String> {
        self.accounts
            .get_or_init(|| {
                let mut out = Vec::new();
                for &alpha in &ACCOUNTS_ALPHAS {
                    for &t in &HORIZONS {
                        let cfg = self.config(
                            2,
                            t,
                            PolicySpec::Accounts(AccountsOverrides::default()),
                            AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(alpha) },
                            TAIL_REPS,
                            false,
                        );
                        let batch = self.batch(&cfg).map_err(|e| e.to_string())?;
                        out.push(AccountsPoint {
                            alpha,
                            horizon: t,
                            regrets: batch.stats.regrets().to_vec(),
                        });
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn accounts_threshold(&self) -> LabResult<(bool, String)> {
        let points = self.accounts_points().map_err(LabError::Verify)?;
        let mut passed = true;
        let mut parts = Vec::new();
        for &alpha in &ACCOUNTS_ALPHAS {
            let mut xy = Vec::new();
            let mut worst_ratio: f64 = 0.0;
            for p in points.iter().filter(|p| p.alpha == alpha) {
                // Replications are keyed by index, so the first SWEEP_REPS of
                // the larger batch are exactly an N = SWEEP_REPS run.
                let stats = SummaryStats::from_regrets(p.regrets[..SWEEP_REPS as usize].to_vec())?;
                let limit = 8.0 * scale(GameParams::new(2, p.horizon)?);
                worst_ratio = worst_ratio.max(stats.mean / limit);
                xy.push((p.horizon as f64, stats.mean));
            }
            let (ok, slope) = slope_in(&xy, 0.4, 0.6)?;
            passed &= ok && worst_ratio <= 1.0;
            parts.push(format!(
                "alpha {alpha}: slope {slope:.4}, max mean/(8 sqrt(TK ln K)) {worst_ratio:.4}"
            ));
        }
        Ok((passed, format!("{} (slope range [0.4, 0.6])", parts.join("; "))))
    }

    fn stochastic_slope(&self) -> LabResult<(bool, String)> {
        let xy = HORIZONS
            .iter()
            .map(|&t| {
                let cfg = self.config(
                    2,
                    t,
                    PolicySpec::Accounts(AccountsOverrides::default()),
                    AdversarySpec::Biased { epsilon: None },
                    SWEEP_REPS,
                    false,
                );
                Ok((t as f64, self.batch(&cfg)?.stats.mean))
            })
            .collect::<LabResult<Vec<_>>>()?;
        let (passed, slope) = slope_in(&xy, 0.4, 0.65)?;
        Ok((passed, format!("slope {slope:.4} (range [0.4, 0.65]), means {}", fmt_means(&xy))))
    }

    fn soak(&self) -> LabResult<(bool, String)> {
        const T: usize = 100_000;
        let accounts = || PolicySpec::Accounts(AccountsOverrides::default());
        let runs: Vec<(usize, AdversarySpec, u64)> = vec![
            (3, AdversarySpec::Fixed(FixedPattern::Random), 2),
            (2, AdversarySpec::Fixed(FixedPattern::Cyclic(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])), 1),
            (4, AdversarySpec::Stochastic { means: vec![0.3, 0.5, 0.7, 0.5] }, 1),
            (2, AdversarySpec::Biased { epsilon: None }, 2),
            (2, AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.05) }, 1),
            (2, AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.1) }, 1),
            (2, AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.2) }, 1),
            (2, AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.5) }, 1),
        ];
        let mut rounds = 0usize;
        let mut checks = 0u64;
        for (k, adversary, n) in runs {
            let cfg = self.config(k, T, accounts(), adversary, n, true);
            let batch = self.batch(&cfg)?;
            rounds += T * n as usize;
            checks += batch.outcomes.iter().map(|o| o.checks).sum::<u64>();
        }
        Ok((
            rounds >= SOAK_ROUNDS && checks > 0,
            format!("{rounds} checked rounds, {checks} assertions, zero violations"),
        ))
    }

    fn unbiasedness(&self) -> LabResult<(bool, String)> {
        let cfg = self.config(
            3,
            1000,
            PolicySpec::Accounts(AccountsOverrides::default()),
            AdversarySpec::Fixed(FixedPattern::Random),
            2000,
            false,
        );
        let instance = cfg.instance()?;
        let truth = match &instance.adversary {
            AnyAdversary::Fixed(f) => f.arm_totals(),
            _ => unreachable!("fixed adversary"),
        };
        let batch = run_batch(&instance, self.opts.workers)?;
        let mut passed = true;
        let mut parts = Vec::new();
        for (j, &c) in truth.iter().enumerate() {
            let xs: Vec<f64> = batch
                .outcomes
                .iter()
                .map(|o| {
                    let (est, acc) = o.accounts_state.as_ref().expect("accounts state");
                    est[j] + acc[j]
                })
                .collect();
            let stats = SummaryStats::from_regrets(xs)?;
            let z = (stats.mean - c) / stats.std_error();
            passed &= z.abs() <= 4.0;
            parts.push(format!("arm {}: z = {z:+.3}", j + 1));
        }
        Ok((passed, format!("{} (limit 4 standard errors)", parts.join(", "))))
    }

    fn determinism(&self) -> LabResult<(bool, String)> {
        let text = r#"
[game]
arms = 2
horizon = 4096

[policy]
kind = "accounts"

[adversary]
kind = "threshold"
alpha = 0.1

[experiment]
replications = 100
"#;
        let cfg = ConfigFile::parse(text)?.with_overrides(&Overrides {
            seed: Some(self.opts.seed),
            ..Overrides::default()
        })?;
        let digest = cfg.digest();
        let exp = cfg.experiment(None, None)?;
        let instance = exp.instance()?;
        let json = |workers| -> LabResult<String> {
            let batch = run_batch(&instance, workers)?;
            Ok(Summary::new(&digest, exp.params, &batch.stats)?.to_json())
        };
        let (one, four) = (json(1)?, json(4)?);
        Ok((
            one == four,
            format!("summary JSON with 1 and 4 workers: {} bytes each, identical = {}", one.len(), one == four),
        ))
    }

    fn tail(&self) -> LabResult<(bool, String)> {
        // Bounds first, so a bad alpha fails before any simulation.
        let mut bounds = Vec::new();
        for &tail_alpha in &self.opts.tail_alphas {
            for &t in &HORIZONS {
                bounds.push((tail_alpha, t, tail_bound(2, t, tail_alpha)?));
            }
        }
        let points = self.accounts_points().map_err(LabError::Verify)?;
        let mut passed = true;
        let mut worst = f64::NEG_INFINITY;
        let mut comparisons = 0;
        for (_, t, b) in &bounds {
            for p in points.iter().filter(|p| p.horizon == *t) {
                let n = p.regrets.len() as f64;
                let empirical = p.regrets.iter().filter(|&&r| r >= b.threshold).count() as f64 / n;
                let sigma = (b.bound * (1.0 - b.bound) / n).sqrt();
                let excess = empirical - b.bound - 3.0 * sigma;
                worst = worst.max(excess);
                passed &= excess <= 0.0;
                comparisons += 1;
            }
        }
        Ok((
            passed,
            format!(
                "{comparisons} comparisons at N = {TAIL_REPS}, alphas {:?}; max (empirical - bound - 3 sigma) = {worst:.4}",
                self.opts.tail_alphas
            ),
        ))
    }

    /// Run the selected criteria (all when `only` is empty) in order.
    pub fn run_all(&self, only: &[u8]) -> Vec<Outcome> {
        CRITERIA
            .iter()
            .filter(|(id, _)| only.is_empty() || only.contains(id))
            .map(|(id, _)| self.run(*id))
            .collect()
    }
}

fn fmt_means(xy: &[(f64, f64)]) -> String {
    let parts: Vec<String> = xy.iter().map(|(t, m)| format!("{t}:{m:.1}")).collect();
    format!("[{}]", parts.join(", "))
}
