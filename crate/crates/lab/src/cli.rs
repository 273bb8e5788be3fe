use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regretlab_core::minimax::{CostAlphabet, GameClass, DEFAULT_CAP};

use crate::config::{instantiate, ConfigFile, Overrides, TraceLevel};
use crate::error::{LabError, LabResult};
use crate::montecarlo::run_batch;
use crate::report::{prepare_out_dir, write_json, write_text, Metadata, Summary};
use crate::sweep::run_sweep;
use crate::trace::write_trace;
use crate::verify::{Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "regretlab", version, about = "Adversarial bandit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo batch for one configuration.
    Run(RunArgs),
    /// One batch per value of the config's [sweep] axis, plus a slope fit.
    Sweep(RunArgs),
    /// Exact minimax expected regret of a tiny game.
    Minimax(MinimaxArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TraceArg {
    None,
    Summary,
    Full,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replication count N.
    #[arg(long)]
    pub reps: Option<u64>,
    /// Assert the per-round invariants.
    #[arg(long)]
    pub checked: bool,
    #[arg(long, value_enum)]
    pub trace: Option<TraceArg>,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassArg {
    Adaptive,
    Nonadaptive,
}

#[derive(Debug, Args)]
pub struct MinimaxArgs {
    #[arg(long = "K", value_name = "K")]
    pub arms: usize,
    #[arg(long = "T", value_name = "T")]
    pub horizon: usize,
    #[arg(long, value_enum, default_value = "adaptive")]
    pub class: ClassArg,
    /// Maximum pure strategies per side.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u128,
    /// Comma-separated cost levels.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0])]
    pub alphabet: Vec<f64>,
    /// Directory for minimax.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Only these criteria (comma-separated numbers).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    /// Tail-bound parameters for criterion 9.
    #[arg(long, value_delimiter = ',', hide = true)]
    pub tail_alpha: Vec<f64>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            replications: self.reps,
            checked: self.checked,
            trace: self.trace.map(|t| match t {
                TraceArg::None => TraceLevel::None,
                TraceArg::Summary => TraceLevel::Summary,
                TraceArg::Full => TraceLevel::Full,
            }),
        }
    }

    fn load(&self) -> LabResult<(ConfigFile, String)> {
        let cfg = ConfigFile::load(&self.config)?.with_overrides(&self.overrides())?;
        let digest = cfg.digest();
        Ok((cfg, digest))
    }
}

/// Parse arguments and run; usage errors exit 1, help and version exit 0.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cli: Cli) -> LabResult<()> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Minimax(args) => cmd_minimax(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

fn write_metadata(dir: &Path, command: &str, digest: &str, cfg: &ConfigFile) -> LabResult<()> {
    let exp = cfg.experiment(None, None)?;
    let instance = instantiate(&exp)?;
    let meta = Metadata::new(command, digest, instance.policy.name(), instance.adversary.name(), &instance.info);
    for w in &meta.warnings {
        eprintln!("warning: {w}");
    }
    write_json(&dir.join("metadata.json"), &meta)
}

pub fn cmd_run(args: &RunArgs) -> LabResult<()> {
    let (cfg, digest) = args.load()?;
    let exp = cfg.experiment(None, None)?;
    let instance = instantiate(&exp)?;
    prepare_out_dir(&args.out, &digest)?;
    write_metadata(&args.out, "run", &digest, &cfg)?;

    let batch = run_batch(&instance, args.workers)?;
    let summary = Summary::new(&digest, exp.params, &batch.stats)?;
    write_text(&args.out.join("summary.json"), &summary.to_json())?;
    if cfg.experiment.trace != TraceLevel::None {
        write_trace(
            &instance,
            0,
            cfg.experiment.trace.verbosity(),
            &digest,
            &args.out.join("trace_rep0.csv"),
        )?;
    }
    println!(
        "n={} mean={} std={} min={} max={}",
        summary.n, summary.mean, summary.std, summary.min, summary.max
    );
    Ok(())
}

pub fn cmd_sweep(args: &RunArgs) -> LabResult<()> {
    let (cfg, digest) = args.load()?;
    if cfg.sweep.is_none() {
        return Err(LabError::Config("sweep requires a [sweep] section".into()));
    }
    prepare_out_dir(&args.out, &digest)?;
    write_metadata(&args.out, "sweep", &digest, &cfg)?;
    let result = run_sweep(&cfg, &digest, args.workers)?;
    write_text(&args.out.join("sweep.csv"), &result.to_csv())?;
    let summaries: Vec<_> = result.points.iter().map(|p| &p.summary).collect();
    write_json(&args.out.join("summaries.json"), &summaries)?;
    print!("{}", result.to_csv());
    if let Some(slope) = result.slope(&digest)? {
        write_json(&args.out.join("slope.json"), &slope)?;
        println!("slope={} intercept={} max_residual={}", slope.slope, slope.intercept, slope.max_residual);
    }
    Ok(())
}

pub fn cmd_minimax(args: &MinimaxArgs) -> LabResult<()> {
    let class = match args.class {
        ClassArg::Adaptive => GameClass::Adaptive,
        ClassArg::Nonadaptive => GameClass::NonAdaptive,
    };
    let alphabet = CostAlphabet::new(args.alphabet.clone()).map_err(|e| LabError::Config(e.to_string()))?;
    let report = crate::minimax::solve(args.arms, args.horizon, class, alphabet, args.cap)?;
    if let Some(dir) = &args.out {
        prepare_out_dir(dir, &report.config_digest)?;
        write_json(&dir.join("minimax.json"), &report)?;
    }
    println!(
        "K={} T={} class={} value={:.6} gap={:.3e} n_gambler={} n_adversary={} seconds={:.3}",
        report.arms,
        report.horizon,
        report.class,
        report.value,
        report.gap,
        report.n_gambler,
        report.n_adversary,
        report.seconds
    );
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> LabResult<()> {
    let mut opts = VerifyOptions {
        workers: args.workers,
        ..VerifyOptions::default()
    };
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    if !args.tail_alpha.is_empty() {
        opts.tail_alphas = args.tail_alpha.clone();
    }
    let suite = Suite::new(opts);
    let mut failed = Vec::new();
    for id in crate::verify::CRITERIA.iter().map(|(id, _)| *id) {
        if !args.only.is_empty() && !args.only.contains(&id) {
            continue;
        }
        let outcome = suite.run(id);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(format!("criterion {} ({}): {}", outcome.id, outcome.name, outcome.detail));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(LabError::Verify(failed.join("; ")))
    }
}
