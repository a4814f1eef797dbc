//! `lctb`: command-line front end for the LCT / Boehmian toolkit.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 numerical failure.
//! Errors are printed to stderr as a single JSON line.

mod commands;
mod config;
mod error;
mod io;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{BoehmArgs, Context};
use crate::config::{parse_grid, parse_params, GridSpec, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "lctb", version, about = "Linear canonical transforms, weighted convolution and Boehmians")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Unimodular parameters `a,b,c,d`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_params)]
    params: Option<lctb_core::LctParams>,
    /// Output or sampling grid `start:step:count`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write SVG plots of the outputs.
    #[arg(long, global = true)]
    plot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a sampled signal (CSV with columns t,re,im).
    Transform {
        input: PathBuf,
        /// Apply the inverse transform instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Weighted convolution of two signals on the same step.
    Convolve { f: PathBuf, g: PathBuf },
    /// Sample a member of a delta family and check its chirped mass.
    Delta {
        /// triangular, literal, bump or constant.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: u32,
        /// Report the mass outside `[-eps, eps]`.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Run one registered check, or `all`.
    Verify { claim: String },
    /// Operations on truncated quotients of sequences.
    #[command(subcommand)]
    Boehm(BoehmCommand),
}

#[derive(Args)]
struct QuotientArgs {
    input: PathBuf,
    #[arg(long)]
    family: Option<String>,
    /// Number of levels kept in the truncation.
    #[arg(long)]
    depth: Option<usize>,
}

impl QuotientArgs {
    fn view(&self) -> BoehmArgs<'_> {
        BoehmArgs { input: &self.input, family: self.family.as_deref(), depth: self.depth }
    }
}

#[derive(Subcommand)]
enum BoehmCommand {
    /// Embed a signal as `[f *^A φ_n / φ_n]`.
    Embed(QuotientArgs),
    /// Transform the embedded quotient entrywise.
    Lct(QuotientArgs),
    /// Convergence diagnostics for `f + 2^-n e` towards `f`.
    Converge {
        #[command(flatten)]
        q: QuotientArgs,
        /// Use a fixed perturbation, which must not converge.
        #[arg(long)]
        control: bool,
    },
    /// k-th derivative of the embedded quotient.
    Derive {
        #[command(flatten)]
        q: QuotientArgs,
        #[arg(long)]
        k: u32,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("LCTB_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("LCTB_THREADS must be a positive integer, got '{raw}'")))?;
        if n == 0 {
            return Err(CliError::input("LCTB_THREADS must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::numerical(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out = cli.out.clone().or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let ctx = Context { params: cli.params, grid: cli.grid.map(|g| g.0), out, plot: cli.plot, config };
    match &cli.command {
        Command::Transform { input, inverse } => commands::transform(&ctx, input, *inverse),
        Command::Convolve { f, g } => commands::convolve(&ctx, f, g),
        Command::Delta { family, n, eps } => commands::delta(&ctx, family.as_deref(), *n, *eps),
        Command::Verify { claim } => commands::verify(&ctx, claim),
        Command::Boehm(b) => match b {
            BoehmCommand::Embed(q) => commands::boehm_embed(&ctx, &q.view()),
            BoehmCommand::Lct(q) => commands::boehm_lct_cmd(&ctx, &q.view()),
            BoehmCommand::Converge { q, control } => commands::boehm_converge(&ctx, &q.view(), *control),
            BoehmCommand::Derive { q, k } => commands::boehm_derive(&ctx, &q.view(), *k),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::input(e.to_string().trim_end());
            eprintln!("{}", err.json_line());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("{}", e.json_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
