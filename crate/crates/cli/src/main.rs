mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sumprod_core::Error;

use crate::commands::Failure;

#[derive(Parser)]
#[command(name = "sumprod", version, about = "Sum-product experiments on δ-discretized sets")]
struct Cli {
    /// key=value run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (overrides the config; 0 = all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test set and write it as DSET
    Generate(commands::GenerateArgs),
    /// Non-concentration profile of a set
    Analyze { file: PathBuf },
    /// |A+A|, |AA| and K = max(|A+A|, |AA|)/|A|
    Sumprod { file: PathBuf },
    /// Additive energy E(A, B) with the Cauchy–Schwarz check
    Energy { a: PathBuf, b: PathBuf },
    /// Bilinear integral over a grid of frequencies
    Bilinear(commands::BilinearArgs),
    /// Dilation-set extraction
    Extract(commands::ExtractArgs),
    /// Mean of E(A, tA) over t ∈ T with the spectral split
    EnergyMean(commands::EnergyMeanArgs),
    /// Theory curves on a σ grid, with the crossover row
    Exponents(commands::ExponentsArgs),
    /// Falsification sweep over σ, n and seeds
    Sweep(commands::SweepArgs),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = commands::load_config(cli.config.as_deref())?;
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    let out = match cli.command {
        Command::Generate(args) => commands::generate(&args)?,
        Command::Analyze { file } => commands::analyze(&file)?,
        Command::Sumprod { file } => commands::sumprod(&file)?,
        Command::Energy { a, b } => commands::energy(&a, &b)?,
        Command::Bilinear(args) => commands::bilinear(&args, &cfg)?,
        Command::Extract(args) => commands::extract(&args, &cfg)?,
        Command::EnergyMean(args) => commands::energy_mean(&args, &cfg)?,
        Command::Exponents(args) => commands::exponents(&args)?,
        Command::Sweep(args) => commands::sweep(&args, &cfg)?,
    };
    if let Some(text) = out {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(body) = &f.output {
                print!("{body}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Hypothesis(_) => 2,
            Error::Precision { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
            output: None,
        }
    }
}
