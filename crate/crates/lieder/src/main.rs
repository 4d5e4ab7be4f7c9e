use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lieder::commands;

/// Exact derivation computations and outer-derivation certificates for
/// solvable Lie algebras over the rationals.
#[derive(Parser)]
#[command(name = "lieder", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report structure, derivation dimensions and an outer witness.
    Check { file: PathBuf },
    /// Build the table of the solvable extension described by a spec.
    Build {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Construct and verify an outer derivation (exit 0 verified, 1 input error, 2 proof gap).
    Certify {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the spec of a catalog family (abelian, heisenberg, filiform).
    Catalog {
        family: String,
        size: usize,
        /// Keep only the first `s` standard torus vectors.
        #[arg(long)]
        s: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the invariant suite over the catalog (seed from LIEDER_SEED).
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let code = match cli.command {
        Command::Check { file } => commands::cmd_check(&file, &mut out),
        Command::Build { spec, output } => commands::cmd_build(&spec, &output, &mut out),
        Command::Certify { input, output } => commands::cmd_certify(&input, &output, &mut out),
        Command::Catalog {
            family,
            size,
            s,
            output,
        } => commands::cmd_catalog(&family, size, s, &output, &mut out),
        Command::Selftest => commands::cmd_selftest(&mut out),
    };
    ExitCode::from(code as u8)
}
