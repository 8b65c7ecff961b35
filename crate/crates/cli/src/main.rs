use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parlat::{run_closure, run_counterexample, run_query, run_scale, run_verify};
use parlat_core::verify::SuiteConfig;

#[derive(Parser)]
#[command(name = "parlat", version, about = "Multiplier lattices of partial *-algebras")]
struct Cli {
    /// Emit JSON lines instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a space-lattice expression, e.g. "M(M(L(3,2))) <= L(3,inf)".
    Query {
        expr: String,
        /// Use L^(p,ω) instead of L^(p,∞) as the top of the multiplier chain.
        #[arg(long)]
        omega: bool,
    },
    /// Run a verification suite: galois, lattice, holder, young, amalgam, inductive,
    /// membership, lhs, counterexample or all.
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, env = "PARLAT_SEED")]
        seed: Option<u64>,
    },
    /// Closed-set lattices, matching pairs and tightness of a finite relation.
    Closure {
        #[arg(long)]
        relation: PathBuf,
    },
    /// Index sets and adjoint check of an operator on a Hilbert scale.
    Scale {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        op: PathBuf,
    },
    /// The polynomial degree algebra of degree n.
    Counterexample {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Query { expr, omega } => run_query(&expr, cli.json, omega),
        Command::Verify {
            suite,
            trials,
            resolution,
            seed,
        } => run_verify(&suite, SuiteConfig { trials, resolution, seed }, cli.json),
        Command::Closure { relation } => run_closure(&relation, cli.json),
        Command::Scale { config, op } => run_scale(&config, &op, cli.json),
        Command::Counterexample { n } => run_counterexample(n, cli.json),
    };
    // a closed pipe (e.g. `| head`) ends output quietly
    let mut out = std::io::stdout().lock();
    for line in &outcome.stdout {
        if writeln!(out, "{line}").is_err() {
            break;
        }
    }
    let mut err = std::io::stderr().lock();
    for line in &outcome.stderr {
        let _ = writeln!(err, "{line}");
    }
    ExitCode::from(outcome.code as u8)
}
