use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use skewcat_cli::{run, Command, JobSpec, Variant};
use skewcat_core::linalg::Field;

/// Hochschild-Mitchell (co)homology of linear categories with finite group actions.
#[derive(Parser)]
#[command(name = "skewcat", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Check group, category, action and grading axioms.
    Validate(Common),
    /// Build the skew category C[G].
    Skew(Common),
    /// Build the matrix category M_G(C) with its free action.
    Mg(Common),
    /// Build the quotient C/G of a free action.
    Quotient(Common),
    /// Hochschild-Mitchell homology dimensions.
    Hh(Common),
    /// Hochschild-Mitchell cohomology dimensions.
    Hhc(Common),
    /// Compare with the Hochschild complexes of the algebra a(C).
    Oracle(Common),
    /// Run every applicable verification pipeline.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    max_degree: usize,
    /// Split by conjugacy class of the grading (or of the skew category).
    #[arg(long)]
    classes: bool,
    #[arg(long, conflicts_with = "invariants")]
    coinvariants: bool,
    #[arg(long)]
    invariants: bool,
    /// `rational` or `p:<prime>`; defaults to the document's field, else p:101.
    #[arg(long)]
    field: Option<Field>,
    /// Orbit representatives, comma separated.
    #[arg(long, value_delimiter = ',')]
    transversal: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Largest allowed (co)chain basis.
    #[arg(long, default_value_t = skewcat_core::hochschild::DEFAULT_BUDGET)]
    budget: usize,
    /// Sampled pairs for cup-product identities.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

fn job(sub: Sub) -> JobSpec {
    let (command, c) = match sub {
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Skew(c) => (Command::Skew, c),
        Sub::Mg(c) => (Command::Mg, c),
        Sub::Quotient(c) => (Command::Quotient, c),
        Sub::Hh(c) => (Command::Hh, c),
        Sub::Hhc(c) => (Command::Hhc, c),
        Sub::Oracle(c) => (Command::Oracle, c),
        Sub::Verify(c) => (Command::Verify, c),
    };
    let mut j = JobSpec::new(command, c.input);
    j.field = c.field;
    j.max_degree = c.max_degree;
    j.classes = c.classes;
    j.variant = match (c.coinvariants, c.invariants) {
        (true, _) => Some(Variant::Coinvariants),
        (_, true) => Some(Variant::Invariants),
        _ => None,
    };
    j.transversal = c.transversal;
    j.out = c.out;
    j.threads = c.threads;
    j.budget = c.budget;
    j.samples = c.samples;
    j.seed = c.seed;
    j
}

fn main() -> ExitCode {
    let job = job(Cli::parse().command);
    let start = Instant::now();
    match run(&job) {
        Ok(report) => {
            print!("{}", report.render());
            println!("elapsed: {:.2?}", start.elapsed());
            if let Some(path) = &job.out {
                if let Err(e) = std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display())) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
