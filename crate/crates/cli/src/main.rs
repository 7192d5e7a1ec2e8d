mod catalog;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "mubforge", version, about = "Build and exactly verify complete sets of mutually unbiased bases")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, env = "MUBFORGE_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the constructions with their parameter constraints.
    Catalog {
        #[arg(long, value_enum, default_value_t = CatalogFormat::Json)]
        format: CatalogFormat,
    },
    /// Construct an object, verify it and print the report.
    Build(BuildArgs),
    /// Re-verify a MUB set, spread or presemifield JSON file.
    Verify {
        path: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Knuth dual of a presemifield given in coefficient form.
    Dual {
        path: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Where to write the dual presemifield JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two MUB sets up to the order of bases and of vectors.
    Compare { a: PathBuf, b: PathBuf },
    /// Re-encode a MUB set as canonical JSON or CSV.
    Export {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CatalogFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Object {
    Mub,
    Spread,
    Presemifield,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildPath {
    /// Symplectic presemifield or spread; commutative inputs go through their dual.
    Symplectic,
    /// Planar (odd) or commutative-presemifield (even) quadratic forms.
    #[value(alias = "planar")]
    Commutative,
    /// Quadratic forms from a pseudo-planar function.
    PseudoPlanar,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    /// As printed for the chosen family.
    Verbatim,
    /// `b·d^9` and `b·x^27`.
    Plain,
    /// `(bd)^9` and `(bx)^27`.
    Grouped,
    GroupedNinth,
    GroupedCube,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModeArgs {
    /// Check every pair (or triple) instead of sampling.
    #[arg(long, conflicts_with = "samples")]
    pub full: bool,
    /// Number of sampled checks.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(value_enum)]
    pub object: Object,
    /// Family name as listed by `catalog`.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub q: u32,
    /// Field modulus coefficients c0,...,cr; default is the smallest irreducible.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Frobenius twist exponent.
    #[arg(long)]
    pub k: Option<u32>,
    /// Nonsquare as coefficients c0,...,c(r-1).
    #[arg(long, value_delimiter = ',')]
    pub nonsquare: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub reading: Option<Reading>,
    /// Pseudo-planar term `c,i,j` for c·x^(2^i + 2^j), c an element index.
    #[arg(long = "monomial")]
    pub monomials: Vec<String>,
    #[arg(long, value_enum)]
    pub path: Option<BuildPath>,
    /// Also check the eigenvector relations of the MUB set.
    #[arg(long)]
    pub eigen: bool,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
    /// Where to write the constructed object.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Catalog { format } => commands::list_catalog(format == CatalogFormat::Text),
        Command::Build(args) => commands::build(&args),
        Command::Verify { path, mode } => commands::verify(&path, &mode),
        Command::Dual { path, mode, out } => commands::dual(&path, &mode, out.as_deref()),
        Command::Compare { a, b } => commands::compare(&a, &b),
        Command::Export { path, format, out } => commands::export(&path, format, out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
