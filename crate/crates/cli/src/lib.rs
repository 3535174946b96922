//! Command-line front-end for the coapprox library.
//!
//! [`run`] parses arguments, executes one command and returns what the
//! binary would print, so the same code path is testable in-process.

mod commands;

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use coapprox::cotree::{DistSpec, Event};
use coapprox::erat::ERat;
use coapprox::lazy::StepBudget;

pub use commands::Rendered;

/// Everything went as hoped: accepted, equal, passed.
pub const EXIT_OK: i32 = 0;
/// A definite negative answer: rejected, counterexample, failed test.
pub const EXIT_NEGATIVE: i32 = 1;
/// No answer: bad input, exhausted budget, unconverged bracket.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "coapprox",
    version,
    about = "Lazy streams, derivative tries and sampling trees, evaluated by finite approximation"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximum number of thunk forces per evaluation.
    #[arg(long, global = true, default_value_t = StepBudget::DEFAULT_STEPS)]
    pub step_budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first N primes of the lazy sieve.
    Sieve {
        #[arg(long)]
        count: usize,
    },
    /// Regular expressions as derivative tries.
    #[command(subcommand)]
    Regex(RegexCommand),
    /// wp and wlp approximation chains of an event.
    Wp {
        #[arg(long)]
        dist: DistSpec,
        #[arg(long)]
        event: Event,
        #[arg(long, default_value_t = 10)]
        fuel: usize,
        /// Require the final wp/wlp bracket to be at most this wide.
        #[arg(long)]
        eps: Option<ERat>,
    },
    /// Draw samples with a seeded bit source and print a histogram.
    Sample {
        #[arg(long)]
        dist: DistSpec,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the empirical frequency of an event with its wp/wlp bracket.
    Equidist {
        #[arg(long)]
        dist: DistSpec,
        #[arg(long)]
        event: Event,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1/100")]
        tol: ERat,
    },
}

#[derive(Debug, Subcommand)]
pub enum RegexCommand {
    /// Test whether a word belongs to the language of a pattern.
    Match {
        pattern: String,
        input: String,
        #[arg(long, default_value = "ab")]
        alphabet: String,
    },
    /// Compare two patterns on every word up to a length.
    Equiv {
        left: String,
        right: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value = "ab")]
        alphabet: String,
    },
    /// Check the Kleene algebra laws on random expressions.
    Laws {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "ab")]
        alphabet: String,
    },
}

/// The outcome of one invocation: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Output {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

/// Run an already parsed command.
pub fn execute(cli: &Cli) -> Output {
    match commands::dispatch(cli) {
        Ok(r) => {
            let stdout = if cli.json { r.json } else { r.text };
            Output {
                code: r.code,
                stdout,
                stderr: r.note.map(|n| format!("error: {n}\n")).unwrap_or_default(),
            }
        }
        Err(msg) => {
            let stdout = if cli.json {
                let v = serde_json::json!({ "error": msg });
                format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
            } else {
                String::new()
            };
            Output {
                code: EXIT_ERROR,
                stdout,
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}
