use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{Outcome, Report};

/// Exact checks for nonassociative coalgebras and their dual algebras.
///
/// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse
/// error, 3 closure budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "nacoalg", version)]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Omit wall-clock timing so identical runs give identical reports.
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Builtin spec name (see `list-examples`).
    #[arg(long, conflicts_with = "spec")]
    pub example: Option<String>,

    /// Spec file in the JSON spec format.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct IdentityArgs {
    /// Parity signature such as `eo`; `*` leaves a slot unconstrained.
    #[arg(long)]
    pub signature: Option<String>,

    /// Permute slots with Koszul signs.
    #[arg(long = "super")]
    pub super_signs: bool,

    /// Pair tensors with the Koszul-signed pairing.
    #[arg(long)]
    pub koszul_pairing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run coalgebra checks and coidentities on a spec.
    Check(CheckArgs),
    /// Generate subcoalgebras, or probe simplicity.
    Closure(ClosureArgs),
    /// Build a new spec and write it to a file.
    Construct(ConstructArgs),
    /// Compute in the dual algebra.
    Dual {
        #[command(subcommand)]
        command: DualCommand,
    },
    /// List the builtin specs and algebras.
    ListExamples,
    /// Write a builtin spec in the spec file format.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: SpecArgs,

    /// Comma-separated check names (coassoc, cocomm, anticocomm, coderivation,
    /// shift-bound, novikov, lie, right-alternative, moufang, jordan, or any
    /// catalog identity).
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,

    /// Identity expression or catalog name, checked as a coidentity.
    #[arg(long)]
    pub identity: Vec<String>,

    #[command(flatten)]
    pub identity_opts: IdentityArgs,

    #[arg(long, default_value_t = 30)]
    pub max_index: u64,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct ClosureArgs {
    #[command(subcommand)]
    pub mode: Option<ClosureMode>,

    #[command(flatten)]
    pub source: SpecArgs,

    /// Comma-separated generator vectors such as `f:1,e:0 + 2*f:3`.
    #[arg(long, value_delimiter = ',')]
    pub generators: Vec<String>,

    #[arg(long, default_value_t = 64)]
    pub max_steps: usize,

    #[arg(long, default_value_t = 4096)]
    pub max_dim: usize,
}

#[derive(Subcommand, Debug)]
pub enum ClosureMode {
    /// Truncated simplicity probe.
    Simplicity(SimplicityArgs),
}

#[derive(Args, Debug)]
pub struct SimplicityArgs {
    #[command(flatten)]
    pub source: SpecArgs,

    #[arg(long, default_value_t = 30)]
    pub horizon: u64,

    /// Random starting vectors in addition to every basis label.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    GelfandDorfman,
    Antisymmetrize,
    Kantor,
    GradedDual,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub construction: Construction,

    #[command(flatten)]
    pub source: SpecArgs,

    /// Builtin graded algebra, for `graded-dual`.
    #[arg(long, conflicts_with_all = ["example", "spec"])]
    pub algebra: Option<String>,

    /// Top degree kept by `graded-dual`.
    #[arg(long, default_value_t = 20)]
    pub horizon: i64,

    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum DualCommand {
    /// Product of two functionals, or a table of coordinate products.
    Product(DualProductArgs),
    /// Brute-force evaluation of an identity on coordinate functionals.
    Identity(DualIdentityArgs),
    /// Seeded Grassmann-envelope check of the Jordan identities.
    Grassmann(GrassmannArgs),
}

#[derive(Args, Debug)]
pub struct DualProductArgs {
    #[command(flatten)]
    pub source: SpecArgs,

    /// Left functional, written as a vector of labels (`f:1`, `2*e:0 - f:3`).
    #[arg(long, requires = "right")]
    pub left: Option<String>,

    #[arg(long, requires = "left")]
    pub right: Option<String>,

    /// Index bound for the table when no functionals are given.
    #[arg(long, default_value_t = 4)]
    pub bound: u64,

    #[arg(long)]
    pub koszul_pairing: bool,
}

#[derive(Args, Debug)]
pub struct DualIdentityArgs {
    #[command(flatten)]
    pub source: SpecArgs,

    #[arg(long)]
    pub identity: String,

    #[command(flatten)]
    pub identity_opts: IdentityArgs,

    #[arg(long, default_value_t = 10)]
    pub bound: u64,
}

#[derive(Args, Debug)]
pub struct GrassmannArgs {
    #[command(flatten)]
    pub source: SpecArgs,

    #[arg(long, default_value_t = 3)]
    pub generators: usize,

    #[arg(long, default_value_t = 50)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Sampled functionals have index at most this.
    #[arg(long, default_value_t = 6)]
    pub max_index: u64,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    pub example: String,

    #[arg(short, long)]
    pub output: PathBuf,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = Report::new(argv.into_iter().skip(1).collect());
    let result = match &cli.command {
        Command::Check(a) => commands::check(a, &mut report),
        Command::Closure(a) => commands::closure(a, &mut report),
        Command::Construct(a) => commands::construct(a, &mut report),
        Command::Dual { command } => commands::dual(command, &mut report),
        Command::ListExamples => commands::list_examples(&mut report),
        Command::Export(a) => commands::export(a, &mut report),
    };
    match result {
        Ok(outcome) => report.finish(outcome),
        Err(f) => {
            report.error = Some(f.message);
            report.finish(f.outcome);
        }
    }
    if !cli.deterministic {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
        if let Some(e) = &report.error {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(report.exit_code)
}

/// Why a command stopped early, and which outcome that maps to.
#[derive(Debug)]
pub struct Failure {
    pub outcome: Outcome,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { outcome: Outcome::Error, message: message.into() }
    }
}

impl From<nacoalg::Error> for Failure {
    fn from(e: nacoalg::Error) -> Self {
        use nacoalg::Error as E;
        let outcome = match e {
            E::ShiftBound { .. } | E::RangeViolation { .. } | E::MissingRule(_) => Outcome::Fail,
            _ => Outcome::Error,
        };
        Failure { outcome, message: e.to_string() }
    }
}
