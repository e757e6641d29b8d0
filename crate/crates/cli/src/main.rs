//! `confalg`: exact computations in associative conformal algebras.
//!
//! Exit status: 0 when the command ran and its check passed (decisions such
//! as `is-current` exit 0 for either answer), 1 when a check failed or a
//! result is indeterminate, 2 for usage and spec errors.

mod commands;
mod error;
mod report;
mod spec;

use clap::{Args, Parser, Subcommand};
use commands::{Flags, Outcome};
use error::CliError;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "confalg", version, about = "Exact computer algebra for associative conformal algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit a JSON report (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Emit an indented plain-text report.
    #[arg(long, global = true)]
    text: bool,

    /// Seed for sampled elements.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of sampled elements or pairs.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Oracle window W: coefficients n in [-W, W] are realized.
    #[arg(long, global = true)]
    window: Option<i64>,

    /// Degree bound for spanning sets and semi-decisions.
    #[arg(long, global = true)]
    degree: Option<u32>,

    /// Number of closure rounds for growth profiles.
    #[arg(long, global = true)]
    rmax: Option<u32>,

    /// Search cap: locality bound, or nilpotency index where relevant.
    #[arg(long, global = true)]
    cap: Option<u32>,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Path to a JSON algebra spec.
    spec: PathBuf,
}

#[derive(Args, Debug)]
struct Pair {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the sesquilinearity axioms on sampled pairs.
    CheckAxioms(SpecArg),
    /// n-products of two elements (all nonzero orders when --n is omitted).
    Product {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Nonzero products among generators.
    Table {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
    },
    /// Locality degree N(a, b).
    Locality {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        pair: Pair,
    },
    /// Compare n-products with the formal-distribution realization.
    OracleCheck {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u32>,
    },
    /// Associativity of the realized coefficients and the iterated product identity.
    AssocCheck {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        c: Option<String>,
        /// Two orders m1,m2.
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u32>,
    },
    /// Untwist Dif(B, ad r) into a current algebra.
    Untwist(SpecArg),
    /// Semi-decide whether Dif(A', ad a) is current.
    IsCurrent {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        a: Option<String>,
    },
    /// Consistency of an alternative conformal identity of a current algebra.
    DualIdentity {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        e: Option<String>,
    },
    /// Lift an ideal of B, check nilpotency on both sides and the round trips.
    IdealCheck {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
    },
    /// Split a span by the 0-product with a conformal identity.
    UnitalSplit {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        e: Option<String>,
        #[arg(long, value_delimiter = ',')]
        span: Vec<String>,
    },
    /// Write a = sum (x^i / i!) a_i with d/dx a_i = 0.
    KernelDecompose {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        a: Option<String>,
    },
    /// Rank profile of the generated closure and growth classification.
    Gk {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckAxioms(_) => "check-axioms",
            Command::Product { .. } => "product",
            Command::Table { .. } => "table",
            Command::Locality { .. } => "locality",
            Command::OracleCheck { .. } => "oracle-check",
            Command::AssocCheck { .. } => "assoc-check",
            Command::Untwist(_) => "untwist",
            Command::IsCurrent { .. } => "is-current",
            Command::DualIdentity { .. } => "dual-identity",
            Command::IdealCheck { .. } => "ideal-check",
            Command::UnitalSplit { .. } => "unital-split",
            Command::KernelDecompose { .. } => "kernel-decompose",
            Command::Gk { .. } => "gk",
        }
    }

    fn spec_path(&self) -> &PathBuf {
        match self {
            Command::CheckAxioms(s) | Command::Untwist(s) => &s.spec,
            Command::Product { spec, .. }
            | Command::Table { spec, .. }
            | Command::Locality { spec, .. }
            | Command::OracleCheck { spec, .. }
            | Command::AssocCheck { spec, .. }
            | Command::IsCurrent { spec, .. }
            | Command::DualIdentity { spec, .. }
            | Command::IdealCheck { spec, .. }
            | Command::UnitalSplit { spec, .. }
            | Command::KernelDecompose { spec, .. }
            | Command::Gk { spec, .. } => &spec.spec,
        }
    }
}

fn run(cmd: &Command, flags: &Flags) -> Result<Outcome, CliError> {
    let spec = spec::load_spec(cmd.spec_path())?;
    let s = &spec;
    match cmd {
        Command::CheckAxioms(_) => commands::check_axioms(s, flags),
        Command::Product { pair, n, .. } => commands::product(s, &pair.a, &pair.b, *n, flags),
        Command::Table { gens, .. } => commands::table(s, gens, flags),
        Command::Locality { pair, .. } => commands::locality(s, &pair.a, &pair.b, flags),
        Command::OracleCheck { pair, orders, .. } => commands::oracle(s, &pair.a, &pair.b, orders, flags),
        Command::AssocCheck { pair, c, orders, .. } => commands::assoc(s, [&pair.a, &pair.b, c], orders, flags),
        Command::Untwist(_) => commands::untwist(s, flags),
        Command::IsCurrent { a, .. } => commands::is_current_cmd(s, a, flags),
        Command::DualIdentity { e, .. } => commands::dual_identity(s, e, flags),
        Command::IdealCheck { ideal, gens, .. } => commands::ideal_check(s, ideal, gens, flags),
        Command::UnitalSplit { e, span, .. } => commands::unital_split_cmd(s, e, span),
        Command::KernelDecompose { a, .. } => commands::kernel(s, a),
        Command::Gk { gens, .. } => commands::gk(s, gens, flags),
    }
}

fn emit(v: &Value, text: bool) {
    let body = if text {
        report::to_text(v)
    } else {
        serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
    };
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let flags = Flags {
        seed: cli.seed,
        samples: cli.samples,
        window: cli.window,
        degree: cli.degree,
        rmax: cli.rmax,
        cap: cli.cap,
    };
    let name = cli.command.name();
    let spec = cli.command.spec_path().display().to_string();
    match run(&cli.command, &flags) {
        Ok(out) => {
            let mut report = serde_json::Map::new();
            report.insert("command".into(), json!(name));
            report.insert("spec".into(), json!(spec));
            report.extend(out.report);
            emit(&Value::Object(report), cli.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("confalg {name}: {e}");
            let mut error = json!({ "kind": e.kind(), "message": e.to_string() });
            if let CliError::SpecParse { line, column, .. } = &e {
                error["line"] = json!(line);
                error["column"] = json!(column);
            }
            let report = json!({ "command": name, "spec": spec, "verdict": "error", "error": error });
            emit(&report, cli.text);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
