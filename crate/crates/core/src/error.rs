use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Runtime invariants asserted by the engine in checked mode.
///
/// The `Display` label of each variant is a stable identifier that appears in
/// error messages and verification reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    /// Per-round multiplicative bounds on the change of each arm probability.
    StepRatio,
    /// Per-round decomposition of regret, potential and account increments.
    PotentialDecomposition,
    /// The barrier acts as an approximate lower bound on arm probabilities.
    ExplorationFloor,
    /// Distributions sum to one with strictly positive components.
    Normalization,
    /// Potentials start at `ln K / eta` and never go negative.
    PotentialRange,
    /// Against the threshold adversary, `p` moves toward the threshold.
    ThresholdDrift,
}

impl Invariant {
    pub const ALL: [Invariant; 6] = [
        Invariant::StepRatio,
        Invariant::PotentialDecomposition,
        Invariant::ExplorationFloor,
        Invariant::Normalization,
        Invariant::PotentialRange,
        Invariant::ThresholdDrift,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Invariant::StepRatio => "Prop 6.1",
            Invariant::PotentialDecomposition => "Prop 6.2",
            Invariant::ExplorationFloor => "Prop 6.3",
            Invariant::Normalization => "normalization",
            Invariant::PotentialRange => "potential range",
            Invariant::ThresholdDrift => "Obs 8.1",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantViolation {
    pub invariant: Invariant,
    /// 1-based round in which the violation was detected.
    pub round: usize,
    /// 0-based arm, when the check is per arm.
    pub arm: Option<usize>,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at round {}", self.invariant, self.round)?;
        if let Some(arm) = self.arm {
            write!(f, ", arm {}", arm + 1)?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its documented domain.
    Argument(String),
    /// A configuration value failed validation.
    Config(String),
    /// An operation was requested in a state that does not support it.
    State(String),
    /// A policy or adversary broke the episode contract.
    Protocol(String),
    /// A checked-mode invariant failed.
    Invariant(InvariantViolation),
    /// An enumeration would exceed its cap.
    Size {
        what: &'static str,
        count: Option<u128>,
        cap: u128,
    },
    /// The game solver did not certify the requested duality gap.
    Numeric { gap: f64, target: f64 },
    /// An episode inside a Monte Carlo batch failed.
    Replication { index: u64, source: Box<Error> },
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Innermost error, unwrapping replication context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Replication { source, .. } => source.root(),
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::State(msg) => write!(f, "invalid state: {msg}"),
            Error::Protocol(msg) => write!(f, "protocol error: {msg}"),
            Error::Invariant(v) => write!(f, "invariant violation: {v}"),
            Error::Size { what, count, cap } => match count {
                Some(count) => write!(f, "{what}: {count} strategies exceeds cap {cap}"),
                None => write!(f, "{what}: strategy count overflows, cap {cap}"),
            },
            Error::Numeric { gap, target } => {
                write!(f, "solver reached duality gap {gap:e}, target {target:e}")
            }
            Error::Replication { index, source } => write!(f, "replication {index}: {source}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<InvariantViolation> for Error {
    fn from(v: InvariantViolation) -> Self {
        Error::Invariant(v)
    }
}
