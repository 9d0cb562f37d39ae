//! `hsif` — frame analysis of lattice translate systems on the
//! Heisenberg group.

mod commands;
mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::SessionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "hsif",
    about = "Certify orthonormality / Bessel / frame / Riesz properties of Heisenberg lattice translate systems and compute dual generators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Session configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the lambda-grid size M.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Override the fiber truncation rmax.
    #[arg(long, global = true)]
    rmax: Option<usize>,

    /// Override the oracle lattice truncation N.
    #[arg(long, global = true)]
    lattice: Option<i64>,

    /// Override the Fourier-side tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output directory for reports and data files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Data table format where applicable.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run the orthonormality / Bessel / frame / Parseval / Riesz suite.
    Analyze,
    /// Emit the sampled bracket table G_{k,l}(lambda) of one generator.
    Bracket,
    /// Emit the oracle Gram matrix of lattice translates.
    Gram,
    /// Canonical or user-supplied dual workflows.
    Dual,
    /// Parseval normalization of a generator.
    Normalize,
    /// Built-in path-equivalence suite (no config needed).
    Selftest,
}

fn run(cli: Cli) -> Result<i32, String> {
    if matches!(cli.command, Command::Selftest) {
        return commands::selftest(&cli.out);
    }
    let config_path = cli.config.as_ref().ok_or("--config is required for this command")?;
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| format!("cannot read config {}: {e}", config_path.display()))?;
    let mut cfg = SessionConfig::parse(&text)?;
    if let Some(m) = cli.grid {
        cfg.grid = m;
    }
    if let Some(r) = cli.rmax {
        cfg.rmax = r;
    }
    if let Some(n) = cli.lattice {
        cfg.lattice = n;
    }
    if let Some(t) = cli.tol {
        cfg.tol_fourier = t;
    }
    let params = cfg.analysis_params()?;

    match cli.command {
        Command::Analyze => commands::analyze(&cfg, &text, &params, &cli.out),
        Command::Bracket => commands::bracket_cmd(&cfg, &text, &params, &cli.out, cli.format),
        Command::Gram => commands::gram_cmd(&cfg, &text, &params, &cli.out),
        Command::Dual => commands::dual_cmd(&cfg, &text, &params, &cli.out),
        Command::Normalize => commands::normalize_cmd(&cfg, &text, &params, &cli.out),
        Command::Selftest => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
