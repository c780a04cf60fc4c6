//! `kobalab`: runs declarative experiments and writes artifact directories.
//!
//! Exit codes: 0 on success or a passing verdict, 2 on a failing verdict,
//! 1 on errors (including malformed configs and bad arguments).

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Kind};
use experiments::Status;

#[derive(Parser)]
#[command(name = "kobalab", version, about = "Kobayashi-metric experiments on bounded convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment kind named in the config.
    Run(Common),
    /// Bracket the Kobayashi distance between two points.
    Distance(Common),
    /// Tabulate a geodesic segment or ray.
    Geodesic(Common),
    /// Probe the visibility of a pair of boundary points.
    Visibility(Common),
    /// Estimate the boundary limit set of a path family.
    LimitSet(Common),
    /// Classify limit-set pairs into the two admissible cases.
    Conjecture1(Common),
    /// Iterate a self-map and estimate its target set.
    Iterate(Common),
    /// Check orbit invariance of sequential horospheres.
    Horosphere(Common),
    /// Check the polydisc Julia inequality.
    Julia(Common),
    /// Decide where orbits of a self-map converge.
    DwVerdict(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON, schema v1).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Suppress the summary line.
    #[arg(long)]
    quiet: bool,
    /// Worker threads for the parallel loops.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Command {
    fn split(self) -> (Option<Kind>, Common) {
        match self {
            Command::Run(c) => (None, c),
            Command::Distance(c) => (Some(Kind::Distance), c),
            Command::Geodesic(c) => (Some(Kind::Geodesic), c),
            Command::Visibility(c) => (Some(Kind::Visibility), c),
            Command::LimitSet(c) => (Some(Kind::LimitSet), c),
            Command::Conjecture1(c) => (Some(Kind::Conjecture1), c),
            Command::Iterate(c) => (Some(Kind::Iterate), c),
            Command::Horosphere(c) => (Some(Kind::Horosphere), c),
            Command::Julia(c) => (Some(Kind::Julia), c),
            Command::DwVerdict(c) => (Some(Kind::DwVerdict), c),
        }
    }
}

fn execute(command: Command) -> Result<Status> {
    let (expected, args) = command.split();
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(kind) = expected {
        if kind != cfg.kind {
            bail!("config kind is {}, not {}", cfg.kind.name(), kind.name());
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.budget.is_some() {
        cfg.budget = args.budget;
    }
    let outcome = experiments::run(&cfg)?;
    output::write_bundle(&args.out, &cfg, &outcome.report, &outcome.tables)?;
    if !args.quiet {
        let status = match outcome.report.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        println!("{}: {status} -> {}", cfg.kind.name(), args.out.join("result.json").display());
    }
    Ok(outcome.report.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
