//! Streaming per-round CSV traces.
//!
//! Header: `round,arm,cost,incurred` and, at full verbosity,
//! `p_1..p_K,A_1..A_K,R_best`. `arm` is 1-based, `cost` is the chosen arm's
//! cost, `incurred` the cumulative gambler cost, `R_best` the regret against
//! the best arm so far. Account columns are empty for non-Accounts policies.
//! The first line is a `# config_digest=...` comment.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use regretlab_core::engine::{run_episode, EpisodeOutcome, Instance, RoundObserver, RoundView, Verbosity};

use crate::error::{LabError, LabResult};

pub struct CsvTrace<W: Write> {
    out: W,
    full: bool,
    line: String,
    error: Option<io::Error>,
}

impl<W: Write> CsvTrace<W> {
    pub fn new(mut out: W, arms: usize, verbosity: Verbosity, digest: &str) -> io::Result<Self> {
        let full = verbosity == Verbosity::Full;
        writeln!(out, "# config_digest={digest}")?;
        let mut header = String::from("round,arm,cost,incurred");
        if full {
            for j in 1..=arms {
                write!(header, ",p_{j}").unwrap();
            }
            for j in 1..=arms {
                write!(header, ",A_{j}").unwrap();
            }
            header.push_str(",R_best");
        }
        writeln!(out, "{header}")?;
        Ok(Self {
            out,
            full,
            line: String::new(),
            error: None,
        })
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> RoundObserver for CsvTrace<W> {
    fn on_round(&mut self, view: &RoundView<'_>) -> regretlab_core::Result<()> {
        let line = &mut self.line;
        line.clear();
        // Display for f64 is the shortest representation that parses back exactly.
        write!(
            line,
            "{},{},{},{}",
            view.round,
            view.chosen + 1,
            view.costs.get(view.chosen),
            view.incurred()
        )
        .unwrap();
        if self.full {
            for p in view.distribution {
                write!(line, ",{p}").unwrap();
            }
            match view.accounts {
                Some(a) => a.accounts().iter().for_each(|x| write!(line, ",{x}").unwrap()),
                None => view.distribution.iter().for_each(|_| line.push(',')),
            }
            write!(line, ",{}", view.ledger.current_max().1).unwrap();
        }
        line.push('\n');
        if let Err(e) = self.out.write_all(line.as_bytes()) {
            self.error = Some(e);
            return Err(regretlab_core::Error::State("trace write failed".into()));
        }
        Ok(())
    }
}

/// Replay `replication` of `instance`, streaming its trace to `path`.
pub fn write_trace(
    instance: &Instance,
    replication: u64,
    verbosity: Verbosity,
    digest: &str,
    path: &Path,
) -> LabResult<EpisodeOutcome> {
    let io_err = |e| LabError::io(path, e);
    let file = File::create(path).map_err(io_err)?;
    let mut trace = CsvTrace::new(BufWriter::new(file), instance.config.params.arms(), verbosity, digest)
        .map_err(io_err)?;
    let result = run_episode(instance, replication, &mut trace);
    match (result, trace.finish()) {
        (_, Err(e)) => Err(io_err(e)),
        (Err(e), _) => Err(e.into()),
        (Ok(outcome), Ok(_)) => Ok(outcome),
    }
}
