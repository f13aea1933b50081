//! `dlk`: batch front end for the denial logic workbench.
//!
//! Exit codes: 0 success or accepted, 1 rejected, refuted or a failure
//! report, 2 usage or I/O error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dlk_core::logics::LogicProfile;
use dlk_core::Execution;

use io::CliError;

#[derive(Parser)]
#[command(name = "dlk", version, about = "Denial logic workbench")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Logic profile: jl, dl, dl0, lp or fused.
    #[arg(long, global = true, value_name = "LOGIC")]
    pub logic: Option<LogicProfile>,
    /// Run without the data-parallel core.
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl Global {
    pub fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    pub fn logic_or(&self, fallback: LogicProfile) -> LogicProfile {
        self.logic.unwrap_or(fallback)
    }
}

#[derive(Args, Clone, Copy)]
pub struct SearchArgs {
    /// Forward-chaining rounds.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Size bound on instantiated metavariables.
    #[arg(long, default_value_t = 4)]
    pub size: usize,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EnumKind {
    Terms,
    Formulas,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Pairing {
    Enumerated,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Parse formulas (or terms) and print them canonically.
    Parse {
        inputs: Vec<String>,
        #[arg(long)]
        term: bool,
    },
    /// Check a Hilbert proof against a constant specification.
    CheckProof {
        proof: PathBuf,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Evaluate formulas in a model (prints 0 or 1 per formula).
    Eval {
        #[arg(long)]
        model: PathBuf,
        formulas: Vec<String>,
    },
    /// Audit a model against the closure conditions of its profile.
    Audit {
        #[arg(long)]
        model: PathBuf,
    },
    /// Run the staged construction.
    BuildModel {
        /// const-zero, const-one, plus-syntactic or spec-driven.
        #[arg(long, default_value = "const-zero")]
        functional: String,
        /// JSON rule table `[{"term", "formula", "bit"}]`; overrides --functional.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Realize this specification.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "P,Q")]
        vars: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "x,y")]
        leaves: Vec<String>,
        #[arg(long, default_value_t = 3)]
        fm_size: usize,
        #[arg(long, default_value_t = 3)]
        tm_size: usize,
        /// Seed a variable, e.g. `--set P=1`.
        #[arg(long = "set", value_name = "VAR=BIT")]
        assignments: Vec<String>,
        #[arg(long, value_enum, default_value = "enumerated")]
        pairing: Pairing,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the stage trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Close a specification under the rules of its profile.
    CloseSpec {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also look for a model within bounds.
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value_t = 4)]
        fm_size: usize,
        #[arg(long, default_value_t = 3)]
        tm_size: usize,
    },
    /// Formulas with a derivable justification, within bounds.
    ExtractOk {
        spec: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Include witness proofs.
        #[arg(long)]
        proofs: bool,
    },
    /// Search a JL model of the extracted knowledge.
    BluePill {
        spec: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check each extracted formula for a JL model on its own.
    CheckCoherence {
        spec: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Replace negatively justified subformulas by fresh variables.
    Translate {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a proof of F to a proof of p:F.
    Internalize {
        proof: PathBuf,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a bundled scenario.
    Scenario {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Dump a bounded enumeration.
    Enumerate {
        #[arg(value_enum)]
        what: EnumKind,
        #[arg(long, value_delimiter = ',', default_value = "P")]
        vars: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "x")]
        leaves: Vec<String>,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// List the axiom schemas of a profile.
    Schemas,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    match cli.command {
        Command::Parse { inputs, term } => commands::parse(g, &inputs, term),
        Command::CheckProof { proof, spec } => commands::check_proof(g, &proof, spec.as_deref()),
        Command::Eval { model, formulas } => commands::eval(g, &model, &formulas),
        Command::Audit { model } => commands::audit(g, &model),
        Command::BuildModel {
            functional,
            rules,
            spec,
            vars,
            leaves,
            fm_size,
            tm_size,
            assignments,
            pairing,
            out,
            trace,
        } => commands::build_model(
            g,
            &commands::BuildArgs {
                functional,
                rules,
                spec,
                vars,
                leaves,
                fm_size,
                tm_size,
                assignments,
                pairing,
                out,
                trace,
            },
        ),
        Command::CloseSpec {
            spec,
            out,
            probe,
            fm_size,
            tm_size,
        } => commands::close_spec(g, &spec, out.as_deref(), probe, fm_size, tm_size),
        Command::ExtractOk {
            spec,
            search,
            proofs,
        } => commands::extract_ok(g, &spec, search, proofs),
        Command::BluePill { spec, search, out } => {
            commands::blue_pill(g, &spec, search, out.as_deref())
        }
        Command::CheckCoherence { spec, search } => commands::check_coherence(g, &spec, search),
        Command::Translate { file, out } => commands::translate(g, &file, out.as_deref()),
        Command::Internalize { proof, spec, out } => {
            commands::internalize(g, &proof, spec.as_deref(), out.as_deref())
        }
        Command::Scenario { name, list } => commands::scenario(g, name.as_deref(), list),
        Command::Enumerate {
            what,
            vars,
            leaves,
            size,
        } => commands::enumerate(g, what, &vars, &leaves, size),
        Command::Schemas => commands::schemas(g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dlk: {e}");
            ExitCode::from(e.code())
        }
    }
}
