//! Command-line front end: simulate Cauchy data, add noise, image, verify
//! identities and render images, plus the file formats they share.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "roughscat", version, about = "Elastic rough-surface scattering and imaging")]
pub struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override a config key, e.g. `--set geometry.N=50`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the forward problem for every source and write a dataset.
    Simulate,
    /// Add Gaussian noise to a dataset.
    Corrupt {
        /// Input dataset (default paths.dataset).
        input: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the indicator on the sampling grid.
    Image {
        /// Input dataset (default paths.dataset).
        dataset: Option<PathBuf>,
        /// Also write the per-column ridge.
        #[arg(long)]
        ridge: Option<PathBuf>,
    },
    /// Run identity checks; exit 1 if any fails.
    Verify {
        /// Comma-separated suites or `all`.
        #[arg(long)]
        suite: Option<String>,
        /// Override every check's tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Convert an image CSV to an ASCII PGM.
    Render {
        /// Image CSV (default paths.image).
        image: Option<PathBuf>,
    },
}

/// Parse arguments, run, and return the exit code. `env` looks up
/// environment overrides.
pub fn run_with_env<I, T>(args: I, env: impl Fn(&str) -> Option<String>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, env) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("roughscat: {e}");
            e.code
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, |k| std::env::var(k).ok())
}

fn execute(cli: &Cli, env: impl Fn(&str) -> Option<String>) -> CliResult<i32> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), env)?;
    for s in &cli.set {
        cfg.assign(s)?;
    }
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    pool.install(|| dispatch(cli, &cfg))
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> CliResult<i32> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Simulate => commands::simulate(cfg, out).map(|_| EXIT_OK),
        Command::Corrupt { input, delta, seed } => {
            commands::corrupt(cfg, input.as_deref(), *delta, *seed, out).map(|_| EXIT_OK)
        }
        Command::Image { dataset, ridge } => commands::image(cfg, dataset.as_deref(), out, ridge.as_deref()).map(|_| EXIT_OK),
        Command::Verify { suite, tol } => {
            let (text, code) = commands::verify(cfg, suite.as_deref(), *tol, out)?;
            print!("{text}");
            Ok(code)
        }
        Command::Render { image } => commands::render(cfg, image.as_deref(), out).map(|_| EXIT_OK),
    }
}
