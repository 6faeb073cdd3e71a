//! `chabauty`: command-line front end for the limit engine.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use chabauty_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "chabauty", version, about = "Limits of conjugates of the diagonal Cartan in SL(n, Q_p)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// The prime p (input files carry their own).
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Relative precision N in p-adic digits.
    #[arg(long, global = true, default_value_t = 32)]
    pub precision: u32,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Append wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    #[value(alias = "json")]
    Structured,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixInput {
    /// Matrix document (JSON with kind = "matrix").
    pub file: Option<PathBuf>,
    /// Inline rows as JSON, e.g. '[["5","0"],["0","1/5"]]'; needs --p.
    #[arg(long, conflicts_with = "file")]
    pub matrix: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of classes of Q_p^* modulo k-th powers.
    Qk {
        #[arg(long)]
        k: u64,
    },
    /// Limit of a conjugated family, cross-checked by the numeric oracle.
    Limit {
        /// Family or preset document.
        file: Option<PathBuf>,
        /// Preset name such as sl2, sl3-Nalpha, sl4-N4; needs --p.
        #[arg(long, conflicts_with = "file")]
        preset: Option<String>,
        /// Parameter of the preset (alpha or beta).
        #[arg(long, requires = "preset")]
        param: Option<String>,
    },
    /// Verify the SL(n) table of limits of the diagonal Cartan.
    Tables {
        #[arg(long)]
        n: usize,
    },
    /// Elliptic or hyperbolic.
    Classify(MatrixInput),
    /// Hyperbolic element built from an upper triangular trace-zero matrix.
    Witness(MatrixInput),
    /// Conjugacy verdict for two table families, written NAME[:PARAM].
    Invariant {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Operations on the tree of SL(2, Q_p).
    #[command(subcommand)]
    Tree(TreeCommand),
}

#[derive(Subcommand, Debug)]
pub enum TreeCommand {
    /// Translation length from Newton slopes and by ball minimisation.
    TranslationLength(MatrixInput),
    /// Image of a vertex, written [p^a, b; 0, p^c] or base.
    Act {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value = "base")]
        vertex: String,
    },
    /// Whether the matrix fixes a vertex.
    Stabilizer {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value = "base")]
        vertex: String,
    },
    /// Which points of the standard ray an upper unipotent fixes.
    Ray {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value_t = 12)]
        depth: u32,
    },
}

/// A finished command: the structured report, its text rendering, and
/// whether every mathematical check passed.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub passed: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CheckFailed { .. } | Error::NotStabilized(_) | Error::NonConvergent(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut json = outcome.json;
    let mut text = outcome.text;
    if cli.global.timings {
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        json["elapsed_ms"] = serde_json::json!(ms.round() as u64);
        text.push_str(&format!("elapsed: {ms:.0} ms\n"));
    }
    let rendered = match cli.global.format {
        Format::Text => text,
        Format::Structured => serde_json::to_string_pretty(&json).expect("report serializes") + "\n",
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}
