//! `cdv`: batch analysis of semi-simple CDV-structure point data.
//!
//! Reads a JSON document (file path or standard input), runs one analysis,
//! and prints a machine-readable verdict document on standard output.

mod doc;
mod run;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use doc::{InputDocument, Mode};
use run::Flags;

#[derive(Parser)]
#[command(name = "cdv", version, about = "Analysis of strong potentiality for semi-simple (Tate) CDV structures", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the V matrix from metric-potential jets
    Vmatrix(CommonArgs),
    /// Pointwise Tate-structure verdicts from the kappa matrix
    CheckTate(CommonArgs),
    /// The explicit 2x2 strong-potentiality criterion (d even)
    #[command(name = "criterion-2d")]
    Criterion2d(CommonArgs),
    /// Formal reduction of a rank-one system to diagonal normal form
    Reduce(CommonArgs),
    /// Monodromy verdicts: exact Levelt route plus numeric transport
    Monodromy(CommonArgs),
    /// Solve the polynomial potentiality equation
    Potential(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input document path, or '-' for standard input
    #[arg(default_value = "-")]
    input: String,
    /// Truncation order for series reductions (default 2m + 4)
    #[arg(long)]
    order: Option<usize>,
    /// Degree cap for the potentiality recursion
    #[arg(long, default_value_t = 64)]
    max_degree: usize,
    /// Local error tolerance for the numeric transport
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Loop radius for the numeric transport
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Expected scalar mode; must agree with the document when given
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Vmatrix(_) => "vmatrix",
            Command::CheckTate(_) => "check-tate",
            Command::Criterion2d(_) => "criterion-2d",
            Command::Reduce(_) => "reduce",
            Command::Monodromy(_) => "monodromy",
            Command::Potential(_) => "potential",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Vmatrix(a)
            | Command::CheckTate(a)
            | Command::Criterion2d(a)
            | Command::Reduce(a)
            | Command::Monodromy(a)
            | Command::Potential(a) => a,
        }
    }
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let args = cli.command.args();

    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let doc = json!({ "command": name, "error": format!("cannot read input: {e}") });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            return ExitCode::from(2);
        }
    };
    let parsed: InputDocument = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => {
            let doc = json!({ "command": name, "error": format!("malformed document: {e}") });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            return ExitCode::from(2);
        }
    };
    let flags = Flags {
        order: args.order,
        max_degree: args.max_degree,
        tolerance: args.tolerance,
        radius: args.radius,
        mode: args.mode,
    };
    let (output, code) = run::run(name, &parsed, &flags);
    println!("{}", serde_json::to_string_pretty(&output).unwrap());
    ExitCode::from(code as u8)
}
