//! Command-line front end for `idalg`: argument definitions, dispatch and
//! reporting. The binary is a thin wrapper around [`run`].

pub mod commands;
pub mod parse;
pub mod report;
pub mod sysfile;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use report::{Outcome, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "idalg", version, about = "Exact iterative differential algebra and q-Mahler systems")]
pub struct Cli {
    /// Also write the machine-readable report (JSON) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterative derivations on k[t] and k(t).
    #[command(subcommand)]
    Hasse(HasseCmd),
    /// Iterative differential modules over F_p(t).
    #[command(subcommand)]
    Idmod(IdmodCmd),
    /// q-Mahler systems over Q(z).
    #[command(subcommand)]
    Mahler(MahlerCmd),
    /// Polynomial relations among power series.
    #[command(subcommand)]
    Relations(RelationsCmd),
}

#[derive(Debug, Subcommand)]
pub enum HasseCmd {
    /// Randomized check of the identity, Leibniz and composition axioms.
    Check {
        /// Prime characteristic; omit for Q.
        #[arg(long)]
        p: Option<u64>,
        /// Largest i + j in the composition check.
        #[arg(long, default_value_t = 32)]
        bound: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Maximum degree of the random polynomials.
        #[arg(long, default_value_t = 10)]
        deg: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Apply the i-th derivation to a rational function.
    Apply {
        /// Derivation index i.
        index: u64,
        /// Expression in z or t, e.g. "(1 + t)/(1 - t^2)".
        expr: String,
        /// Prime characteristic; omit for Q.
        #[arg(long)]
        p: Option<u64>,
    },
}

/// Where a module comes from: a system file or the built-in example.
#[derive(Debug, Clone, Args)]
pub struct ModuleSource {
    /// System file with `kind = idmod`.
    #[arg(long, conflicts_with_all = ["p", "digits"])]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Digits a_0, a_1, ... of the example system, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub digits: Vec<u64>,
}

#[derive(Debug, Subcommand)]
pub enum IdmodCmd {
    /// Check the iterative-connection axioms up to a bound.
    Check {
        #[command(flatten)]
        source: ModuleSource,
        /// Largest index checked (default: min(p^(m+1) - 1, 16)).
        #[arg(long)]
        bound: Option<u64>,
        /// Series precision N.
        #[arg(long, default_value_t = 64)]
        order: i64,
    },
    /// Horizontal sections modulo t^N.
    Sections {
        #[command(flatten)]
        source: ModuleSource,
        /// Precision N (default p^(m+1)).
        #[arg(long)]
        order: Option<i64>,
    },
    /// Print the connection matrices of the example system.
    Example {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        digits: Vec<u64>,
    },
    /// Search for b_1 = f/g with deg f, deg g bounded, plus the case analysis.
    B1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a0: u64,
        #[arg(long)]
        deg: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum MahlerCmd {
    /// Power-series solution to order N.
    Solve {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
    /// Decide whether alpha is a singularity.
    Singular {
        #[arg(long)]
        file: PathBuf,
        /// Rational point "a/b" with 0 < |alpha| < 1.
        #[arg(long)]
        alpha: String,
    },
    /// Evaluate the solution at alpha by telescoping the system.
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 64)]
        order: usize,
        /// Exact telescoping steps before the series tail.
        #[arg(long, default_value_t = 4)]
        steps: u32,
    },
}

/// Series input for relation search.
#[derive(Debug, Clone, Args)]
pub struct SeriesSource {
    /// `kind = series` (functions f[i]) or `kind = mahler` (solution components).
    #[arg(long)]
    pub file: PathBuf,
    /// Total degree bound d.
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
    /// Truncation order N.
    #[arg(long, default_value_t = 32)]
    pub order: i64,
    /// Adjoin X0 = z.
    #[arg(long)]
    pub z: bool,
}

#[derive(Debug, Subcommand)]
pub enum RelationsCmd {
    /// Basis of relations of degree <= d modulo z^N.
    Find {
        #[command(flatten)]
        source: SeriesSource,
    },
    /// Specialize the discovered relations at a point.
    Specialize {
        #[command(flatten)]
        source: SeriesSource,
        /// Evaluate the functions at this rational point.
        #[arg(long, conflicts_with = "values")]
        alpha: Option<String>,
        /// Explicit values, comma separated (rationals or decimals).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<String>,
        /// Tolerance for floating-point residuals.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Telescoping steps when evaluating a Mahler system.
        #[arg(long, default_value_t = 4)]
        steps: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hasse(HasseCmd::Check { .. }) => "hasse check",
            Command::Hasse(HasseCmd::Apply { .. }) => "hasse apply",
            Command::Idmod(IdmodCmd::Check { .. }) => "idmod check",
            Command::Idmod(IdmodCmd::Sections { .. }) => "idmod sections",
            Command::Idmod(IdmodCmd::Example { .. }) => "idmod example",
            Command::Idmod(IdmodCmd::B1 { .. }) => "idmod b1",
            Command::Mahler(MahlerCmd::Solve { .. }) => "mahler solve",
            Command::Mahler(MahlerCmd::Singular { .. }) => "mahler singular",
            Command::Mahler(MahlerCmd::Eval { .. }) => "mahler eval",
            Command::Relations(RelationsCmd::Find { .. }) => "relations find",
            Command::Relations(RelationsCmd::Specialize { .. }) => "relations specialize",
        }
    }
}

/// Parse arguments, execute, print the report and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { report::EXIT_INPUT };
        }
    };
    let outcome = commands::execute(&cli.command);
    let _ = outcome.print(out, err);
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, outcome.to_json() + "\n") {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return report::EXIT_INPUT;
        }
    }
    outcome.exit_code()
}
