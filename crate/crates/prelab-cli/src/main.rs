use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "prelab", version, about = "Finite prelational monoids, spiders and pregroup parsing")]
struct Cli {
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the monoid in a structure file.
    Check(Source),
    /// Adjoint tables of a pregroup, or the first failing element.
    Adjoints(Source),
    /// Pregroup cover of a spider.
    Decompose(Source),
    /// Theorem sweep over enumerated monoids; exit 0 iff no violations.
    Verify(Sweep),
    /// Classification catalog over enumerated monoids.
    Enumerate(Sweep),
    /// Recognize a sentence with a pregroup lexicon.
    Parse(ParseArgs),
}

#[derive(Args, Debug)]
pub struct Source {
    /// Structure file with one @monoid block.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    pub file: Option<PathBuf>,
    /// Use a built-in fixture instead of a file.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Output-plug reading for residuation (debug).
    #[arg(long, default_value = "over-dual-exists")]
    pub plug: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    General,
    Representable,
    Sampled,
}

#[derive(Args, Debug)]
pub struct Sweep {
    /// Largest carrier size.
    #[arg(long, default_value_t = 2)]
    pub size: usize,
    /// Smallest carrier size.
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
    /// Seed for sampled mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per preorder in sampled mode.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output-plug reading for residuation (debug).
    #[arg(long, default_value = "over-dual-exists")]
    pub plug: String,
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Include the two-line rendering.
    #[arg(long)]
    pub trace: bool,
    /// Report every accepting trace.
    #[arg(long)]
    pub all: bool,
    /// The sentence, as one quoted argument or several words.
    #[arg(required = true)]
    pub sentence: Vec<String>,
}

/// What a subcommand produced: the report body, human text and exit code.
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, result) = match &cli.command {
        Command::Check(s) => ("check", commands::check(s)),
        Command::Adjoints(s) => ("adjoints", commands::adjoints(s)),
        Command::Decompose(s) => ("decompose", commands::decompose(s)),
        Command::Verify(s) => ("verify", commands::sweep(s, true)),
        Command::Enumerate(s) => ("enumerate", commands::sweep(s, false)),
        Command::Parse(p) => ("parse", commands::parse(p)),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("prelab {name}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut report = outcome.report;
    report["subcommand"] = json!(name);
    report["timing"] = json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 });
    let body = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{body}\n")) {
            eprintln!("prelab {name}: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.pretty {
        print!("{}", outcome.text);
    } else if cli.out.is_none() {
        println!("{body}");
    }
    ExitCode::from(outcome.code)
}
