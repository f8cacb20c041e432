use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use faber_krahn::harness::{self, Mode, RunConfig};
use faber_krahn::Error;

#[derive(Parser)]
#[command(name = "fkd", version, about = "Faber–Krahn deficit constants and convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print z_N, ω_N, λ(ball), G_N and C_N.
    Constants {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=100))]
        dim: u32,
    },
    /// Tabulate Q_k with first and second differences.
    Qseq {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=100))]
        dim: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=999))]
        kmax: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a deficit-ratio convergence study from a JSON config.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<CliMode>,
    },
    /// Run the invariant suite.
    Validate {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Analytic,
    Numeric,
    Both,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Analytic => Mode::Analytic,
            CliMode::Numeric => Mode::Numeric,
            CliMode::Both => Mode::Both,
        }
    }
}

const USAGE: u8 = 2;
const CHECK_FAILED: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fkd: {e}");
            let code = match e {
                Error::Config(_) | Error::Json(_) | Error::InvalidProfile(_) | Error::InvalidMode(_) => USAGE,
                Error::UnsupportedDimension(_) => USAGE,
                _ => CHECK_FAILED,
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> faber_krahn::Result<u8> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Constants { dim } => {
            let report = harness::cmd_constants(dim)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            write!(out, "{}", report.to_text())?;
            Ok(0)
        }
        Command::Qseq { dim, kmax, csv } => {
            let report = harness::cmd_qseq(dim, kmax)?;
            let text = report.to_csv();
            match csv {
                Some(path) => std::fs::write(path, &text)?,
                None => write!(out, "{text}")?,
            }
            if report.monotonicity_violations.is_empty() {
                Ok(0)
            } else {
                eprintln!("monotonicity violated at k = {:?}", report.monotonicity_violations);
                Ok(CHECK_FAILED)
            }
        }
        Command::Converge { config, mode } => {
            let text = std::fs::read_to_string(&config)?;
            let mut config: RunConfig = serde_json::from_str(&text)?;
            if let Some(mode) = mode {
                config.mode = mode.into();
            }
            config.validate()?;
            let report = match &config.output {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    harness::run_convergence(&config, Some(&mut file))?
                }
                None => harness::run_convergence(&config, Some(&mut out))?,
            };
            if config.output.is_none() {
                writeln!(out)?;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report.summary)?)?;
            Ok(0)
        }
        Command::Validate { quick } => {
            let report = harness::validate(quick);
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            if report.passed() {
                Ok(0)
            } else {
                eprintln!("failed checks: {}", report.failures().join(", "));
                Ok(CHECK_FAILED)
            }
        }
    }
}
