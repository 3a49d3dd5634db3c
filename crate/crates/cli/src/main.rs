//! `nplift`: Newton polyhedra, edge restrictions and factorization along
//! loose edges from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 hypothesis violation or
//! inconclusive verdict, 3 input error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "nplift", version, about = "Newton polyhedra and factorization along loose edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Comma-separated variable names; inferred in natural order when omitted
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Coefficient ring: Q, F<p> or Z/<p>^<k>
    #[arg(long, default_value = "Q")]
    field: String,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Read expressions from a file, one per line
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Lifting {
    /// Edge index in lexicographic order of endpoint pairs
    #[arg(long)]
    edge: Option<usize>,
    /// Explicit split of the edge polynomial, as G,H
    #[arg(long, value_delimiter = ',', num_args = 1)]
    split: Option<Vec<String>>,
    /// Weighted truncation bound N
    #[arg(long, default_value_t = 32)]
    bound: i64,
    /// Seed for randomized univariate factoring
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertices and compact edges of the Newton polyhedron
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Restriction of a polynomial to one compact edge
    Restrict {
        #[command(flatten)]
        common: Common,
        /// Edge index in lexicographic order of endpoint pairs
        #[arg(long)]
        edge: usize,
        /// Seed for randomized univariate factoring
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Factor in the completion along a loose edge
    Factor {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lifting: Lifting,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Monic factor in the last variable along a descendant loose edge
    Weierstrass {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lifting: Lifting,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Newton-polygon splitting of a one-variable polynomial over Z/p^k
    Padic {
        /// The prime p
        #[arg(short = 'p', long)]
        prime: u32,
        /// Precision k
        #[arg(long, default_value_t = 64)]
        prec: u32,
        /// Seed for randomized univariate factoring
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Read the expression from a file
        #[arg(short = 'f', long = "file")]
        file: Option<PathBuf>,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Check f - g*h against a weighted bound
    Verify {
        #[command(flatten)]
        common: Common,
        /// Weighted truncation bound N
        #[arg(long, default_value_t = 32)]
        bound: i64,
        /// Weights in graded coordinates (default: all ones)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
        /// Take the weights from this compact edge of f
        #[arg(long)]
        edge: Option<usize>,
        /// f, g and h
        #[arg(allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (format, outcome) = report::run(cli.command);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&outcome.body).expect("serializable"),
        Format::Text => report::to_text(&outcome.body),
    };
    println!("{text}");
    ExitCode::from(outcome.code)
}
