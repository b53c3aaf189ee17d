use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "diaglab", version, about = "Exact diagonals, Hadamard products and nilpotence bounds")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// Where a univariate series comes from. `-` reads stdin.
#[derive(Args, Debug, Clone)]
pub struct SeriesSource {
    /// UniSeries JSON file (`-` for stdin).
    #[arg(long, value_name = "PATH", conflicts_with = "catalog")]
    pub series_file: Option<PathBuf>,
    /// Series of a catalog entry, generated at `--order`.
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
}

/// Where an operator comes from.
#[derive(Args, Debug, Clone)]
pub struct OpSource {
    /// Operator JSON file (`-` for stdin).
    #[arg(long, value_name = "PATH", conflicts_with = "params")]
    pub op_file: Option<PathBuf>,
    /// Use the hypergeometric operator of these parameters, e.g. "1/2,1/2;1,1".
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a rational or Laurent expression as a truncated series.
    Expand {
        #[arg(long)]
        expr: String,
        /// Number of variables (default: one more than the largest index used).
        #[arg(long)]
        arity: Option<usize>,
        /// Uniform exponent cap.
        #[arg(long, short = 'N', visible_alias = "order", conflicts_with = "cap")]
        cap_all: Option<i64>,
        /// Per-variable caps, comma separated.
        #[arg(long, value_delimiter = ',')]
        cap: Option<Vec<i64>>,
        /// Per-variable lower exponents for Laurent expansions, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        low: Option<Vec<i64>>,
    },
    /// Diagonal Δ_n of an expression expanded on [0, N]^(n+1), or of a series file.
    Diag {
        #[arg(long, conflicts_with = "multi_file")]
        expr: Option<String>,
        /// Multivariate series JSON file (`-` for stdin).
        #[arg(long, value_name = "PATH")]
        multi_file: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long, short = 'N')]
        order: Option<usize>,
    },
    /// Hadamard product of two or more series files.
    Hadamard {
        #[arg(long = "series-file", value_name = "PATH", num_args = 1.., required = true)]
        series_files: Vec<PathBuf>,
    },
    /// Section e_{r,m}.
    Section {
        #[command(flatten)]
        source: SeriesSource,
        #[arg(long, short = 'N')]
        order: Option<usize>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
    },
    /// The 𝒟 map on a multivariate series (file, or expression expanded at `--order`).
    Dmap {
        #[arg(long, conflicts_with = "multi_file")]
        expr: Option<String>,
        #[arg(long, value_name = "PATH")]
        multi_file: Option<PathBuf>,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long, short = 'N')]
        order: Option<i64>,
    },
    /// Constant terms of the powers of a Laurent polynomial.
    Cts {
        #[arg(long)]
        expr: String,
        #[arg(long, short = 'N')]
        order: usize,
    },
    /// Hypergeometric parameters.
    #[command(subcommand)]
    Hg(HgCommand),
    /// Differential operators at x = 0.
    #[command(subcommand)]
    Ode(OdeCommand),
    /// Nilpotence index of the guessed minimal operator of a series.
    Nil(GuessArgs),
    /// Grade bounds and witnesses.
    #[command(subcommand)]
    Grade(GradeCommand),
    /// Built-in worked examples.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Run the seeded randomized suites.
    Selfcheck {
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
        /// Cases per section-operator suite.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Args, Debug)]
pub struct GuessArgs {
    #[command(flatten)]
    pub source: SeriesSource,
    /// Window when the series comes from the catalog.
    #[arg(long, short = 'N')]
    pub order: Option<usize>,
    /// Largest operator order searched
    #[arg(long)]
    pub max_order: usize,
    /// Largest coefficient degree searched; the window must be at least
    /// `(max_order + 1)(max_deg + 1) + 10`
    #[arg(long)]
    pub max_deg: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Point {
    #[value(name = "0")]
    Zero,
    #[value(name = "inf")]
    Infinity,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormArg {
    Theta,
    Dx,
}

#[derive(Subcommand, Debug)]
pub enum HgCommand {
    /// Coefficients Π(α)_i / Π(β)_i through N.
    Coeffs {
        #[arg(long)]
        params: String,
        #[arg(long, short = 'N')]
        order: usize,
    },
    /// The operator L(α; β).
    Op {
        #[arg(long)]
        params: String,
        #[arg(long, value_enum, default_value = "theta")]
        form: FormArg,
    },
    /// Levelt Jordan structure at 0 or ∞.
    Jordan {
        #[arg(long)]
        params: String,
        #[arg(long, value_enum)]
        at: Point,
    },
    /// Christol's height.
    Height {
        #[arg(long)]
        params: String,
    },
    /// Remove resonant pairs.
    Contract {
        #[arg(long)]
        params: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum OdeCommand {
    /// Indicial polynomial and rational exponents.
    Indicial {
        #[command(flatten)]
        op: OpSource,
    },
    /// Formal solutions with logarithms through shift N.
    Frobenius {
        #[command(flatten)]
        op: OpSource,
        #[arg(long, short = 'N')]
        order: usize,
    },
    /// Nilpotence index of the local monodromy.
    Nil {
        #[command(flatten)]
        op: OpSource,
        /// Solution window (default: the largest exponent gap).
        #[arg(long, short = 'N')]
        order: Option<usize>,
    },
    /// Guess a minimal operator annihilating a series.
    Guess(GuessArgs),
    /// Apply an operator to a series.
    Apply {
        #[command(flatten)]
        op: OpSource,
        #[command(flatten)]
        source: SeriesSource,
        #[arg(long, short = 'N')]
        order: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GradeCommand {
    /// Lower and upper bounds on the diagonal grade.
    Bounds {
        #[command(flatten)]
        guess: GuessArgs,
        /// Witness JSON file (`{"kind": "diagonal"|"hadamard", ...}`).
        #[arg(long, value_name = "PATH")]
        witness_file: Option<PathBuf>,
        /// Order through which the witness is verified (default: the series window).
        #[arg(long)]
        window: Option<usize>,
    },
    /// Check Δ_{arity-1}(expr) against a series.
    VerifyDiag {
        #[command(flatten)]
        source: SeriesSource,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long, short = 'N')]
        order: usize,
    },
    /// Check a Hadamard representation against a series.
    VerifyHad {
        #[command(flatten)]
        source: SeriesSource,
        /// HadamardRep JSON file (`{"factors": [...]}`).
        #[arg(long, value_name = "PATH")]
        witness_file: PathBuf,
        #[arg(long, short = 'N')]
        order: usize,
    },
    /// Look for a section pattern explaining f * g = 0.
    Zerodiv {
        #[arg(long = "series-file", value_name = "PATH", num_args = 2, required = true)]
        series_files: Vec<PathBuf>,
        /// Largest modulus to try.
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, short = 'N')]
        order: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Entry names and descriptions.
    List,
    /// Run one entry and print its verdict.
    Run {
        name: String,
        #[arg(long)]
        window: Option<usize>,
    },
}
