//! `cliquechain`: spectra of cliques joined by chains from the command line.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when the report
//! carries a mismatch between analytic predictions and the oracle (or a
//! published value outside its tolerance).

mod commands;
mod report;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cliquechain::{CliqueNetworkSpec, GraphSpec};
use serde_json::{json, Value};

use report::RunReport;

#[derive(Debug, Parser)]
#[command(
    name = "cliquechain",
    version,
    about = "Laplacian spectra of cliques joined by chains"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Matching or residual tolerance; each command documents its default.
    #[arg(long, global = true, value_name = "REAL")]
    tol: Option<f64>,
    /// Worker threads for sweeps; 0 uses all cores.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    jobs: usize,
    /// Include wall-clock timings (makes the report non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the oracle spectrum into clique, edge, chain and zero modes.
    Spectrum(GraphArgs),
    /// Compare computed values with a published table.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        /// Directory for two-column CSV plot data.
        #[arg(long, value_name = "DIR")]
        plot_data: Option<PathBuf>,
    },
    /// Run a family over parameter ranges.
    Sweep(sweep::SweepArgs),
    /// Weyl intervals for a one- or two-chain graph, checked against the oracle.
    Bounds(GraphArgs),
    /// Reconstruct clique, edge and chain eigenvectors.
    Modes(GraphArgs),
}

/// One graph: `--p --q`, `--p --q1 --q2`, or `--network FILE`.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    q1: Option<usize>,
    #[arg(long)]
    q2: Option<usize>,
    /// Clique network description (JSON).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["p", "q", "q1", "q2"])]
    network: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub enum Target {
    Single { p: usize, q: usize },
    Two { q1: usize, p: usize, q2: usize },
    Network(CliqueNetworkSpec),
}

impl GraphArgs {
    pub fn target(&self) -> Result<Target> {
        if let Some(path) = &self.network {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok(Target::Network(CliqueNetworkSpec::from_json(&text)?));
        }
        let Some(p) = self.p else {
            bail!("give --p with --q, or --p with --q1 and --q2, or --network FILE");
        };
        match (self.q, self.q1, self.q2) {
            (Some(q), None, None) => Ok(Target::Single { p, q }),
            (None, Some(q1), Some(q2)) => Ok(Target::Two { q1, p, q2 }),
            _ => bail!("give either --q or both --q1 and --q2 with --p"),
        }
    }
}

impl Target {
    pub fn build(&self) -> Result<GraphSpec> {
        Ok(match self {
            Target::Single { p, q } => cliquechain::build_single_chain(*p, *q)?,
            Target::Two { q1, p, q2 } => cliquechain::build_two_chain(*q1, *p, *q2)?,
            Target::Network(spec) => cliquechain::build_network(spec)?,
        })
    }

    pub fn parameters(&self) -> Value {
        match self {
            Target::Single { p, q } => json!({ "p": p, "q": q }),
            Target::Two { q1, p, q2 } => json!({ "q1": q1, "p": p, "q2": q2 }),
            Target::Network(spec) => json!({ "network": spec }),
        }
    }
}

/// Report body plus an optional CSV projection.
pub struct Output {
    pub report: RunReport,
    pub csv: Option<String>,
}

fn run(cli: Cli, argv: &[String]) -> Result<ExitCode> {
    let start = Instant::now();
    let common = &cli.common;
    if let Some(t) = common.tol {
        if !(t > 0.0 && t.is_finite()) {
            bail!("--tol must be a positive finite number, got {t}");
        }
    }
    let mut out = match &cli.command {
        Command::Spectrum(g) => commands::spectrum(g, common, argv)?,
        Command::Reproduce { table, plot_data } => {
            commands::reproduce(*table, plot_data.as_deref(), common, argv)?
        }
        Command::Sweep(a) => sweep::run(a, common, argv)?,
        Command::Bounds(g) => commands::bounds(g, common, argv)?,
        Command::Modes(g) => commands::modes(g, common, argv)?,
    };
    if common.timings {
        out.report.timings = Some([("total_s".to_string(), start.elapsed().as_secs_f64())].into());
    }
    for a in &out.report.anomalies {
        eprintln!("{:?} [{}]: {}", a.severity, a.code, a.message);
    }
    let text = match common.format {
        Format::Json => out.report.to_json(),
        Format::Csv => out
            .csv
            .context("this command has no CSV projection; use --format json")?,
    };
    report::emit(&text, common.out.as_deref())?;
    Ok(if out.report.has_mismatch() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli, &argv[1..]) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
