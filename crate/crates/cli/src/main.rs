mod commands;
mod output;
mod spec;

use std::io::{self, Write};
use std::process::ExitCode;

use bvis_core::counting::DEFAULT_BRUTE_LIMIT;
use bvis_core::verify::DEFAULT_SEED;
use bvis_core::visibility::DEFAULT_ORACLE_LIMIT;
use bvis_core::{Case, ErrorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

/// Lattice-point b-visibility: predicates, exact counts and densities.
#[derive(Debug, Parser)]
#[command(name = "bvis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide visibility of one point and print a witness if invisible.
    Check(CheckArgs),
    /// Exact number of visible points in a box.
    Count(CountArgs),
    /// Visible proportion in the box for N against the limiting density.
    Density(DensityArgs),
    /// List the visible points of the box for N in lexicographic order.
    Sieve(SieveArgs),
    /// Certified zeta(s) and 1/zeta(s).
    Zeta(ZetaArgs),
    /// Run the verification battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Exponent vector, e.g. `2,4,3,7`, `2/3,1/2` or `1,-2`.
    #[arg(long = "b", allow_hyphen_values = true)]
    b: String,
    /// Override the case inferred from `--b`.
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    Int,
    Rat,
    Signed,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Int => Case::Integer,
            CaseArg::Rat => Case::Rational,
            CaseArg::Signed => Case::Signed,
        }
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Point coordinates. For rational exponents, the base tuple unless
    /// `--expanded` is given.
    #[arg(long)]
    point: String,
    /// Read `--point` as coordinates on the restricted lattice.
    #[arg(long)]
    expanded: bool,
    /// Search budget for the integer-case parametric oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    limit: u64,
}

#[derive(Debug, Args)]
#[group(id = "extent", required = true, multiple = false, args = ["n", "box_edges"])]
struct CountArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "N")]
    n: Option<String>,
    /// Explicit box edges, e.g. `8,4` (base tuples for rational exponents).
    #[arg(long = "box")]
    box_edges: Option<String>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "N")]
    n: String,
}

#[derive(Debug, Args)]
struct SieveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "N")]
    n: String,
    /// Largest box (number of points) that may be enumerated.
    #[arg(long, env = "BVIS_BRUTE_LIMIT", default_value_t = DEFAULT_BRUTE_LIMIT)]
    limit: u64,
}

#[derive(Debug, Args)]
struct ZetaArgs {
    #[arg(long = "s")]
    s: u32,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Also evaluate the Euler product over primes up to this bound.
    #[arg(long)]
    prime_limit: Option<u64>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    profile: ProfileArg,
    /// Seed for the sampled oracle comparison.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug)]
pub enum Failure {
    Core(bvis_core::Error),
    Io(io::Error),
    /// Number of failed verification checks.
    Checks(usize),
}

impl From<bvis_core::Error> for Failure {
    fn from(e: bvis_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Check(a) => commands::check(
            &mut out,
            &a.common.b,
            a.common.case.map(Into::into),
            &a.point,
            a.expanded,
            a.limit,
            a.common.format,
        ),
        Command::Count(a) => commands::count(
            &mut out,
            &a.common.b,
            a.common.case.map(Into::into),
            a.n.as_deref(),
            a.box_edges.as_deref(),
            a.common.format,
        ),
        Command::Density(a) => commands::density(
            &mut out,
            &a.common.b,
            a.common.case.map(Into::into),
            &a.n,
            a.common.format,
        ),
        Command::Sieve(a) => commands::sieve(
            &mut out,
            &a.common.b,
            a.common.case.map(Into::into),
            &a.n,
            a.limit,
            a.common.format,
        ),
        Command::Zeta(a) => commands::zeta(&mut out, a.s, a.tol, a.prime_limit, a.format),
        Command::Verify(a) => {
            let profile = match a.profile {
                ProfileArg::Quick => bvis_core::verify::Profile::Quick,
                ProfileArg::Full => bvis_core::verify::Profile::Full,
            };
            commands::verify(&mut out, profile, a.seed, a.format)
        }
    }?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Checks(n)) => {
            eprintln!("{n} verification check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Usage => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::Resource => 4,
            })
        }
    }
}
