//! Argument parsing, dispatch and report rendering for the `hol` binary.

pub mod commands;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

pub use error::{CliError, Result};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "hol", version, about = "Hereditary orders over F_q(t): local structure, Picard groups, Frobenius torsors")]
pub struct Cli {
    /// Seed for randomized witness searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local chain orders over F_q((t)).
    #[command(subcommand)]
    Local(LocalCmd),
    /// Central simple algebras.
    #[command(subcommand)]
    Csa(CsaCmd),
    /// Numerical invariants of a global order.
    #[command(subcommand)]
    Global(GlobalCmd),
    /// Picard groups.
    #[command(subcommand)]
    Pic(PicCmd),
    /// Groups of modular automorphisms.
    #[command(subcommand)]
    W(WCmd),
    /// Moduli of Frobenius bimodules.
    #[command(subcommand)]
    Se(SeCmd),
    /// Twists between moduli at different poles.
    #[command(subcommand)]
    Twist(TwistCmd),
    /// Special modules at a bad place.
    #[command(subcommand)]
    Special(SpecialCmd),
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    pub chain: PathBuf,
    /// Working precision (t-adic digits); defaults to HOL_PRECISION or 4 d e.
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum LocalCmd {
    Analyze(ChainArgs),
    Morita(ChainArgs),
    Phi {
        #[command(flatten)]
        chain: ChainArgs,
        /// Degree of the unramified extension.
        #[arg(long)]
        n: u32,
        /// Power of the radical.
        #[arg(long)]
        m: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CsaCmd {
    Validate { order: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GlobalCmd {
    Invariants { order: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PicCmd {
    Group { order: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum WCmd {
    Group {
        order: PathBuf,
        #[arg(long)]
        pole: String,
        #[arg(long)]
        level: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeCmd {
    Torsor {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        slope: PathBuf,
        #[arg(long)]
        level: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        max_n: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TwistCmd {
    Datum {
        a: PathBuf,
        #[arg(long)]
        pole: String,
        #[arg(long)]
        new_pole: String,
        #[arg(long)]
        level: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpecialCmd {
    Check { module: PathBuf },
}

/// Runs one command and returns its report, tagged with the schema version.
pub fn run(cli: &Cli) -> Result<Value> {
    let body = commands::dispatch(&cli.command, cli.seed)?;
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), SCHEMA.into());
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Ok(Value::Object(out))
}

/// Pretty JSON, or flattened `key: value` lines.
pub fn render(report: &Value, text: bool) -> String {
    if !text {
        return serde_json::to_string_pretty(report).expect("reports serialize");
    }
    let mut lines = Vec::new();
    flatten("", report, &mut lines);
    lines.join("\n")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            xs.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out))
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}
