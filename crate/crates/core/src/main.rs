use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use simplex_proj::cli::{self, CliConfig, Mode};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Vector,
    Matrix,
}

/// Project vectors or matrix rows onto the probability simplex.
#[derive(Debug, Parser)]
#[command(name = "simplex-proj", version)]
struct Args {
    /// Input file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    input: String,

    /// Output file, or `-` for standard output.
    #[arg(long, default_value = "-")]
    output: String,

    #[arg(long, value_enum, default_value = "matrix")]
    mode: ModeArg,

    /// Field separator.
    #[arg(long, default_value_t = ',')]
    delimiter: char,

    /// Required row sum.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    target_sum: f64,

    /// Check every output row against the KKT conditions; exit 3 on failure.
    #[arg(long)]
    verify: bool,

    /// Print per-row support size, shift and squared distance to stderr.
    #[arg(long)]
    report: bool,

    /// Decimal digits in the output (17 = shortest exact representation).
    #[arg(long, default_value_t = 9)]
    precision: usize,
}

fn path_arg(s: String) -> Option<PathBuf> {
    (s != "-").then(|| PathBuf::from(s))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = CliConfig {
        input: path_arg(args.input),
        output: path_arg(args.output),
        mode: match args.mode {
            ModeArg::Vector => Mode::Vector,
            ModeArg::Matrix => Mode::Matrix,
        },
        delimiter: args.delimiter,
        target_sum: args.target_sum,
        verify: args.verify,
        report: args.report,
        precision: args.precision,
    };
    ExitCode::from(cli::run(&config) as u8)
}
