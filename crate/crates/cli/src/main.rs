use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qcd_core::experiments::validate::{run_suite, ValidationSuite};
use qcd_core::experiments::{
    config_echo, header_comments, run_curve, run_sweep_diff, write_csv, write_json, CsvRow,
    EtaPoint, ExperimentConfig, GridSpec, OutputFormat,
};
use qcd_core::{ChannelFamily, InputMode, StrategyKind};

#[derive(Parser)]
#[command(
    name = "qcd",
    version,
    about = "Multi-shot qubit channel discrimination experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimized success probability vs number of shots.
    Curve(RunArgs),
    /// Bayesian minus Markovian success probability at three shots over a grid.
    SweepDiff(RunArgs),
    /// Run a built-in validation suite.
    Validate {
        /// oneshot-closed-forms, strategy-reductions, monte-carlo or povm-properties
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// depolarizing, bit-flip or amplitude-damping
    #[arg(long)]
    family: Option<ChannelFamily>,
    /// η0 of a point (fraction of π/2 for amplitude damping); repeat with --eta1.
    #[arg(long, allow_negative_numbers = true)]
    eta0: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta1: Vec<f64>,
    /// MIN:MAX:STEPS on both axes.
    #[arg(long)]
    grid: Option<GridSpec>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Comma-separated subset of global,bayesian,markovian.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<StrategyKind>>,
    /// flat or adaptive
    #[arg(long)]
    input_mode: Option<InputMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall time per row (output is then no longer reproducible byte for byte).
    #[arg(long)]
    timing: bool,
    /// Nelder–Mead starts per optimization.
    #[arg(long)]
    max_starts: Option<usize>,
    /// Objective evaluations per start.
    #[arg(long)]
    max_evals: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_json_str(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(f) = self.family {
            cfg.family = f;
        }
        if self.eta0.len() != self.eta1.len() {
            anyhow::bail!("--eta0 and --eta1 must be given the same number of times");
        }
        if !self.eta0.is_empty() {
            cfg.points = self
                .eta0
                .iter()
                .zip(&self.eta1)
                .map(|(&eta0, &eta1)| EtaPoint { eta0, eta1 })
                .collect();
        }
        if self.grid.is_some() {
            cfg.grid = self.grid;
        }
        if let Some(n) = self.n_max {
            cfg.n_max = n;
        }
        if let Some(s) = self.strategies {
            cfg.strategies = s;
        }
        if let Some(m) = self.input_mode {
            cfg.input_mode = m;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        cfg.timing |= self.timing;
        if let Some(n) = self.max_starts {
            cfg.optimizer.max_starts = n;
        }
        if let Some(n) = self.max_evals {
            cfg.optimizer.max_evals = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

fn emit<R: CsvRow + serde::Serialize + Clone>(
    cfg: &ExperimentConfig,
    command: &str,
    rows: &[R],
) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match &cfg.out {
        Some(path) => {
            Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let sink = BufWriter::new(sink);
    match cfg.format {
        OutputFormat::Csv => write_csv(sink, &header_comments(cfg, command), rows)?,
        OutputFormat::Json => write_json(sink, config_echo(cfg, command), rows)?,
    }
    Ok(())
}

fn run_experiment(args: RunArgs, command: &str) -> Result<(), Failure> {
    let cfg = args.into_config().map_err(Failure::Config)?;
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Runtime(e.into()))?;
    }
    let classify = |e: qcd_core::Error| match e {
        qcd_core::Error::Config(_) | qcd_core::Error::OutOfRange { .. } => {
            Failure::Config(e.into())
        }
        other => Failure::Runtime(other.into()),
    };
    let report = |warnings: Vec<String>| warnings.iter().for_each(|w| eprintln!("warning: {w}"));
    if command == "curve" {
        let out = run_curve(&cfg).map_err(classify)?;
        report(out.warnings);
        emit(&cfg, command, &out.rows).map_err(Failure::Runtime)
    } else {
        if cfg.grid.is_none() && !cfg.points.is_empty() {
            eprintln!("warning: sweep-diff ignores explicit points and uses the default grid");
        }
        let out = run_sweep_diff(&cfg).map_err(classify)?;
        report(out.warnings);
        emit(&cfg, command, &out.rows).map_err(Failure::Runtime)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Curve(args) => run_experiment(args, "curve"),
        Command::SweepDiff(args) => run_experiment(args, "sweep-diff"),
        Command::Validate { suite, seed } => {
            let suite: ValidationSuite = match suite.parse() {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run_suite(suite, seed) {
                Ok(report) => {
                    println!("{report}");
                    return if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    };
                }
                Err(e) => Err(Failure::Runtime(e.into())),
            }
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
