//! `kernelmap`: kernel sets, decompositions and Lie-module checks from JSON
//! problem files.
//!
//! Exit status: 0 when every mandatory check passes, 1 when one fails (or
//! an internal consistency check trips), 2 for unusable input.

mod commands;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kernelmap::invariants::Property;
use kernelmap::report::all_mandatory_pass;
use kernelmap::{BigRational, Error, Field, GaussianRational};

use commands::{Outcome, Report};
use problem::{load, Loaded};

#[derive(Parser, Debug)]
#[command(name = "kernelmap", version, about = "Exact kernel maps and rank-one decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random choice (default 0, or the file's "seed").
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Random probe vectors for `decomposable` (default 64).
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Scalar field: Q or Qi (default Q, or the file's "field").
    #[arg(long, global = true)]
    field: Option<Field>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel map and kernel set of "matrix" relative to "nest" or "lattice".
    KernelSet { file: PathBuf },
    /// Rank-one decomposition aligned with the kernel set over "nest".
    Decompose { file: PathBuf },
    /// Full enumeration of the annihilation bilattice.
    Bil { file: PathBuf },
    /// Lie module generated by "generators" over "nest".
    LieClosure { file: PathBuf },
    /// Whether "matrix" splits into rank-one members of the Lie module
    /// generated by "generators".
    Decomposable { file: PathBuf },
    /// Seeded property suites over random instances.
    CheckInvariants {
        /// Optional problem file supplying "seed" and "field".
        file: Option<PathBuf>,
        /// Random instances per property.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Restrict to these properties (repeatable); default all.
        #[arg(long = "property")]
        properties: Vec<Property>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::KernelSet { .. } => "kernel-set",
            Command::Decompose { .. } => "decompose",
            Command::Bil { .. } => "bil",
            Command::LieClosure { .. } => "lie-closure",
            Command::Decomposable { .. } => "decomposable",
            Command::CheckInvariants { .. } => "check-invariants",
        }
    }

    fn file(&self) -> Option<&PathBuf> {
        match self {
            Command::KernelSet { file }
            | Command::Decompose { file }
            | Command::Bil { file }
            | Command::LieClosure { file }
            | Command::Decomposable { file } => Some(file),
            Command::CheckInvariants { file, .. } => file.as_ref(),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit status 2.
    Input(String),
    /// An internal consistency check failed: exit status 1.
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) | Error::SearchExhausted { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn dispatch<S>(command: &Command, loaded: &Loaded) -> Result<Outcome, CliError>
where
    S: kernelmap::Scalar + Send + Sync,
{
    let p = &loaded.problem;
    Ok(match command {
        Command::KernelSet { .. } => commands::kernel_set::<S>(p)?,
        Command::Decompose { .. } => commands::decompose_cmd::<S>(p)?,
        Command::Bil { .. } => commands::bil_cmd::<S>(p)?,
        Command::LieClosure { .. } => commands::lie_closure::<S>(p)?,
        Command::Decomposable { .. } => commands::decomposable::<S>(p, loaded.params)?,
        Command::CheckInvariants { cases, properties, .. } => {
            let props = if properties.is_empty() {
                Property::ALL.to_vec()
            } else {
                properties.clone()
            };
            commands::check_invariants::<S>(&props, *cases, loaded.params)
        }
    })
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let name = cli.command.name();
    let loaded = load(cli.command.file().map(PathBuf::as_path), name, cli.field, cli.seed, cli.samples)?;
    let outcome = match loaded.params.field {
        Field::Rational => dispatch::<BigRational>(&cli.command, &loaded)?,
        Field::Gaussian => dispatch::<GaussianRational>(&cli.command, &loaded)?,
    };
    let passed = all_mandatory_pass(&outcome.checks);
    let report = Report {
        command: name.to_string(),
        inputs_digest: loaded.digest,
        results: outcome.results,
        checks: outcome.checks,
    };
    let mut text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .map_err(|e| CliError::Internal(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }

    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.mandatory && !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        eprintln!("{name}: {} checks, all mandatory checks passed", report.checks.len());
    } else {
        eprintln!("{name}: failed checks: {}", failed.join(", "));
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
