use rayon::prelude::*;
use regretlab_core::engine::{run_replication, EpisodeOutcome, Instance, SummaryStats};

use crate::error::LabResult;

/// Per-replication outcomes in replication order, with their summary.
#[derive(Debug, Clone)]
pub struct Batch {
    pub stats: SummaryStats,
    pub outcomes: Vec<EpisodeOutcome>,
}

/// Run every replication of `instance` on a pool of `workers` threads
/// (0 picks the machine's parallelism).
///
/// Results are gathered in replication order before any reduction, so the
/// batch is bit-identical for every worker count. On failure the error of the
/// lowest failing replication is returned.
pub fn run_batch(instance: &Instance, workers: usize) -> LabResult<Batch> {
    let n = instance.config.replications;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let results: Vec<_> = pool.install(|| (0..n).into_par_iter().map(|i| run_replication(instance, i)).collect());
    let outcomes = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let stats = SummaryStats::from_regrets(outcomes.iter().map(|o| o.regret).collect())?;
    Ok(Batch { stats, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use regretlab_core::engine::{run_monte_carlo, AdversarySpec, AlphaSpec, ExperimentConfig, PolicySpec, Verbosity};
    use regretlab_core::policies::AccountsOverrides;
    use regretlab_core::GameParams;

    #[test]
    fn parallel_matches_serial() {
        let cfg = ExperimentConfig {
            params: GameParams::new(2, 500).unwrap(),
            policy: PolicySpec::Accounts(AccountsOverrides::default()),
            adversary: AdversarySpec::Threshold { alpha: AlphaSpec::Fixed(0.1) },
            replications: 37,
            seed: 3,
            verbosity: Verbosity::None,
            checked: true,
        };
        let inst = cfg.instance().unwrap();
        let (serial, _) = run_monte_carlo(&inst).unwrap();
        for workers in [1, 3, 4] {
            let batch = run_batch(&inst, workers).unwrap();
            assert_eq!(batch.stats, serial);
        }
    }
}
