use std::path::PathBuf;
use std::process::ExitCode;

use bethegeom::Precision;
use bethegeom_cli::{emit, resolve, run, CliError, Command, Format, Overrides, EXIT_INFRASTRUCTURE};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Std,
    Extended,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Std => Precision::Std,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

/// Numerical verification of XXZ Bethe ansatz, vertex functions,
/// QQ-systems and q-opers.
#[derive(Debug, Parser)]
#[command(name = "bethegeom", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
}

fn execute(args: Args) -> Result<u8, CliError> {
    let raw =
        std::fs::read_to_string(&args.config).map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let overrides = Overrides {
        command: Some(args.command),
        seed: args.seed,
        out: args.out,
        format: args.format,
        precision: args.precision.map(Into::into),
    };
    let config = resolve(&raw, &overrides)?;
    let report = run(&config);
    emit(&report, config.output.format)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INFRASTRUCTURE } else { 0 });
        }
    };
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bethegeom: {e}");
            ExitCode::from(EXIT_INFRASTRUCTURE)
        }
    }
}
