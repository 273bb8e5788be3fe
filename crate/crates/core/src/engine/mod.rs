//! Episode protocol, Monte Carlo replication and result analysis.

mod bounds;
mod checks;
mod config;
mod episode;
mod stats;

pub use bounds::{slope_fit, tail_bound, SlopeFit, TailBound};
pub use checks::{AccountsChecker, DriftChecker};
pub use config::{
    AdversarySpec, AlphaSpec, ExperimentConfig, FixedPattern, Instance, InstanceInfo, PolicySpec,
    Rate, Verbosity,
};
pub use episode::{
    play, run_episode, EpisodeOutcome, NoopObserver, RoundObserver, RoundView, RunTrace,
    TraceCollector,
};
pub use stats::{empirical_tail, run_monte_carlo, run_replication, SummaryStats, SUMMARY_QUANTILES};
