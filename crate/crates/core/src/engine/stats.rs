use alloc::boxed::Box;
use alloc::vec::Vec;

use super::config::Instance;
use super::episode::{run_episode, EpisodeOutcome, NoopObserver};
use crate::numeric::CompensatedSum;
use crate::{Error, Result};

/// Quantile levels reported in every summary.
pub const SUMMARY_QUANTILES: [f64; 3] = [0.5, 0.9, 0.99];

/// Distribution of final regrets over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    regrets: Vec<f64>,
    sorted: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator, 0 for a single value).
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryStats {
    /// Summaries of regrets given in replication order.
    pub fn from_regrets(regrets: Vec<f64>) -> Result<Self> {
        if regrets.is_empty() {
            return Err(Error::argument("no replications to summarize"));
        }
        if regrets.iter().any(|r| !r.is_finite()) {
            return Err(Error::argument("non-finite regret"));
        }
        let n = regrets.len() as f64;
        let mut sum = CompensatedSum::new();
        sum.extend(regrets.iter().copied());
        let mean = sum.value() / n;
        let std = if regrets.len() > 1 {
            let mut ss = CompensatedSum::new();
            ss.extend(regrets.iter().map(|r| (r - mean) * (r - mean)));
            libm::sqrt(ss.value() / (n - 1.0))
        } else {
            0.0
        };
        let mut sorted = regrets.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            regrets,
            sorted,
            mean,
            std,
        })
    }

    pub fn n(&self) -> usize {
        self.regrets.len()
    }

    pub fn regrets(&self) -> &[f64] {
        &self.regrets
    }

    /// Linear-interpolation quantile between order statistics, `q` in `[0, 1]`.
    pub fn quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        let h = (self.sorted.len() - 1) as f64 * q;
        let lo = libm::floor(h) as usize;
        let hi = (lo + 1).min(self.sorted.len() - 1);
        self.sorted[lo] + (h - lo as f64) * (self.sorted[hi] - self.sorted[lo])
    }

    pub fn quantiles(&self) -> Vec<(f64, f64)> {
        SUMMARY_QUANTILES.iter().map(|&q| (q, self.quantile(q))).collect()
    }

    /// Fraction of replications with regret `>= x`.
    pub fn tail(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|&r| r < x);
        (self.sorted.len() - below) as f64 / self.sorted.len() as f64
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        self.std / libm::sqrt(self.n() as f64)
    }
}

pub fn empirical_tail(stats: &SummaryStats, x: f64) -> f64 {
    stats.tail(x)
}

/// One replication, with its index attached to any error.
pub fn run_replication(instance: &Instance, replication: u64) -> Result<EpisodeOutcome> {
    run_episode(instance, replication, &mut NoopObserver).map_err(|e| Error::Replication {
        index: replication,
        source: Box::new(e),
    })
}

/// Serial Monte Carlo over all configured replications, in index order.
pub fn run_monte_carlo(instance: &Instance) -> Result<(SummaryStats, Vec<EpisodeOutcome>)> {
    let outcomes = (0..instance.config.replications)
        .map(|r| run_replication(instance, r))
        .collect::<Result<Vec<_>>>()?;
    let stats = SummaryStats::from_regrets(outcomes.iter().map(|o| o.regret).collect())?;
    Ok((stats, outcomes))
}
