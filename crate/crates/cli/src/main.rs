//! `secmux` command-line front end: region sweeps, verification suites and
//! discrete leakage simulation.

mod config;
mod output;
mod region;
mod simulate;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use secmux::gaussian::RegionKind;
use secmux::verify::Suite;
use secmux::Execution;

use config::{RunConfig, Units, Workflow};

const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_GUARDRAIL: u8 = 4;

/// Why a run stopped, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Verification(String),
    Guardrail(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    /// Enumeration refusals are guardrails; everything else the library
    /// rejects comes from the inputs it was handed.
    pub fn from_core(e: secmux::Error) -> Self {
        match e {
            secmux::Error::StateSpaceTooLarge { .. } | secmux::Error::EnumerationTooLarge(_) => {
                Failure::Guardrail(e.into())
            }
            _ => Failure::Runtime(e.into()),
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Verification(_) => EXIT_VERIFICATION,
            Failure::Guardrail(_) => EXIT_GUARDRAIL,
            Failure::Runtime(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "secmux", version, about = "Secure multiplex coding on interference channels")]
struct Cli {
    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep power splits and write region vertices, report and overlay.
    Region(RegionArgs),
    /// Run exact verification suites.
    Verify(VerifyArgs),
    /// Sample codes on a discrete instance and compare exact leakage with
    /// its bounds.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct RegionArgs {
    /// Grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Region kinds to sweep (repeatable or comma separated).
    #[arg(long = "kind", value_delimiter = ',')]
    kinds: Vec<RegionKind>,
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    tau2: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suites to run (repeatable or comma separated; default all).
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<Suite>,
    #[arg(long, hide = true)]
    inject_singular_hash: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    /// Comma-separated rho grid.
    #[arg(long, value_delimiter = ',')]
    rho: Vec<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
}

fn build_config(cli: &Cli) -> anyhow::Result<(Workflow, RunConfig)> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(units) = cli.units {
        cfg.units = units;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.sequential {
        cfg.execution = Execution::Sequential;
    }
    let workflow = match &cli.command {
        Command::Region(a) => {
            if let Some(g) = a.grid {
                cfg.sweep.resolution = g;
            }
            if !a.kinds.is_empty() {
                cfg.regions = a.kinds.clone();
            }
            let ch = &mut cfg.channel;
            for (slot, v) in [(&mut ch.tau1, a.tau1), (&mut ch.tau2, a.tau2), (&mut ch.p1, a.p1), (&mut ch.p2, a.p2)] {
                if let Some(v) = v {
                    *slot = v;
                }
            }
            Workflow::Region
        }
        Command::Verify(a) => {
            if !a.suites.is_empty() {
                cfg.suites = a.suites.clone();
            }
            if a.inject_singular_hash {
                cfg.verify.inject_singular_hash = true;
            }
            Workflow::Verify
        }
        Command::Simulate(a) => {
            if !a.rho.is_empty() {
                cfg.rho = a.rho.clone();
            }
            if let Some(s) = a.samples {
                cfg.simulate.samples = s;
            }
            if let Some(d) = a.delta {
                cfg.simulate.delta = d;
            }
            Workflow::Simulate
        }
    };
    cfg.validate(workflow)?;
    Ok((workflow, cfg))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (workflow, cfg) = build_config(cli).map_err(Failure::Config)?;
    match workflow {
        Workflow::Region => region::run(&cfg),
        Workflow::Verify => verify::run(&cfg),
        Workflow::Simulate => simulate::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(e) => eprintln!("config error: {e:#}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
                Failure::Guardrail(e) => eprintln!("refused: {e:#}"),
                Failure::Runtime(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
