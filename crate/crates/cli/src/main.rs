//! `toric`: supersolvable toric arrangements from the command line.

mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use toric_core::tracer::TraceOptions;
use toric_core::Error;

use crate::report::Report;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Chains, monodromy and invariants of toric arrangements")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for projection tilts and fallback loop directions.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Radius of the loops around base punctures.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Minimum number of tracer steps per loop.
    #[arg(long, default_value_t = 256, global = true)]
    density: usize,
    /// Include tracer diagnostics in reports.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

/// `SOURCE` is a path to an arrangement file, or one of `exA`,
/// `circuit N M`, `circuit N M1 M2`, `typeC N`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Poset of layers with its cover relations.
    Poset {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
        /// Largest codimension to build; defaults to the dimension.
        #[arg(long)]
        max_codim: Option<usize>,
        #[arg(long, default_value_t = toric_core::arrangement::DEFAULT_POSET_CAP)]
        cap: usize,
    },
    /// Strictly supersolvable, supersolvable or unknown, with the chain.
    Classify {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
    },
    /// Induced map on first homology of one stage's root map.
    Hrm {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
        #[arg(long)]
        stage: usize,
    },
    /// Braid monodromy along the base generator loops.
    Trace {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        stage: Option<usize>,
        /// Trace every stage from 2 up.
        #[arg(long)]
        all: bool,
    },
    /// Presentation of the fundamental group of the complement.
    Pi1 {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
    },
    /// Degree-two relations and ranks of the lower central series.
    Lcs {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
        /// Number of LCS ranks to report.
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Degree-two cohomology ideal.
    Cohomology {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
    },
    /// Betti numbers of the complement.
    Betti {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
    },
    /// Topological complexity of the complement.
    Tc {
        #[arg(required = true, allow_negative_numbers = true)]
        source: Vec<String>,
    },
    /// Prints a bundled example as an arrangement file.
    Example {
        #[arg(required = true, allow_negative_numbers = true)]
        name: Vec<String>,
    },
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let opts = TraceOptions { epsilon: cli.epsilon, density: cli.density, seed: cli.seed };
    if let Some(e) = cli.epsilon {
        if !(e > 0.0 && e < 0.5) {
            return Err(Error::Parse(format!("epsilon {e} must lie in (0, 1/2)")));
        }
    }
    if cli.density == 0 {
        return Err(Error::Parse("density must be positive".into()));
    }
    match &cli.command {
        Command::Poset { source, max_codim, cap } => report::poset(&input::load(source)?, *max_codim, *cap),
        Command::Classify { source } => report::classify(&input::load(source)?),
        Command::Hrm { source, stage } => report::hrm(&input::load(source)?, *stage),
        Command::Trace { source, stage, all } => {
            report::trace(&input::load(source)?, if *all { None } else { *stage }, &opts, cli.verbose)
        }
        Command::Pi1 { source } => report::pi1(&input::load(source)?, &opts),
        Command::Lcs { source, degree } => report::lcs(&input::load(source)?, *degree),
        Command::Cohomology { source } => report::cohomology(&input::load(source)?),
        Command::Betti { source } => report::betti(&input::load(source)?),
        Command::Tc { source } => report::tc(&input::load(source)?),
        Command::Example { name } => report::example(&input::fixture(name)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = Error::Parse(e.to_string().trim_end().to_string());
            println!("{}", report::error_json(&err));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(r) => {
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.json).expect("reports serialize") + "\n",
                Format::Text => r.text,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(err) => {
            match cli.format {
                Format::Json => println!("{}", report::error_json(&err)),
                Format::Text => eprintln!("{err}"),
            }
            ExitCode::from(if matches!(err, Error::Internal(_)) { 2 } else { 1 })
        }
    }
}
