use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gerbetool::{run, schema, ConfigError, Scenario};

#[derive(Parser)]
#[command(name = "gerbetool", version, about = "Finite-truncation checks for index and caloron bundle gerbes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circle Dirac spectra and spectral flow
    Spectrum(RunArgs),
    /// Cover membership and band additivity
    Cover(RunArgs),
    /// Determinant-line cocycle, associativity and the Hodge isomorphism
    Cocycle(RunArgs),
    /// Fock space: CAR, current commutators, Bogoliubov transport
    Fock(RunArgs),
    /// Caloron transform, B-field identity, Dynkin scaling
    Caloron(RunArgs),
    /// Surface-group representations, holonomy and spectral flow
    Moduli(RunArgs),
    /// Pontryagin pairing of model families
    Pairing(RunArgs),
    /// Every check with desk-scale defaults
    All(RunArgs),
    /// Print the configuration schema with defaults
    Schema {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML scenario; defaults apply to anything omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall time per check (makes reports run-dependent)
    #[arg(long)]
    timings: bool,
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(name: &str, args: &RunArgs) -> Result<i32, ConfigError> {
    let doc = match &args.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read '{}': {e}", path.display())))?,
        ),
        None => None,
    };
    let scenario = Scenario::load(name, doc.as_deref(), args.seed)?;
    let report = run(&scenario, args.timings)?;
    emit(&report.render(), args.out.as_ref())
        .map_err(|e| ConfigError(format!("cannot write report: {e}")))?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Schema { out } => {
            let mut text = serde_json::to_string_pretty(&schema()).expect("schema serializes");
            text.push('\n');
            return match emit(&text, out.as_ref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Spectrum(a) => ("spectrum", a),
        Command::Cover(a) => ("cover", a),
        Command::Cocycle(a) => ("cocycle", a),
        Command::Fock(a) => ("fock", a),
        Command::Caloron(a) => ("caloron", a),
        Command::Moduli(a) => ("moduli", a),
        Command::Pairing(a) => ("pairing", a),
        Command::All(a) => ("all", a),
    };
    match execute(name, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
