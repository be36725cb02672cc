use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Genus-zero characteristic numbers of toric manifolds by mirror
/// transformation.
#[derive(Parser, Debug)]
#[command(name = "mirror", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a manifold (and optionally a bundle) spec.
    Validate(InputArgs),
    /// Fixed points, tangent weights and balloons as JSON.
    FixedPoints(InputArgs),
    /// Hypergeometric series coefficients as JSON.
    Series(RunArgs),
    /// F₀, F_i and G coefficients as JSON.
    MirrorData(RunArgs),
    /// K_d and instanton numbers.
    Invariants(RunArgs),
    /// Independent localization values.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Property suite over the built-in examples.
    Selfcheck {
        /// Restrict every degree bound to one.
        #[arg(long)]
        fast: bool,
        /// Deliberately specialize linking at the wrong endpoint.
        #[arg(long)]
        corrupt_linking: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Manifold spec file, or `builtin:NAME`.
    #[arg(long)]
    manifold: String,
    /// Bundle spec file, or `builtin:NAME`.
    #[arg(long)]
    bundle: Option<String>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Manifold spec file, or `builtin:NAME`.
    #[arg(long)]
    manifold: String,
    /// Bundle spec file, or `builtin:NAME`.
    #[arg(long)]
    bundle: String,
    #[arg(long, default_value_t = 2)]
    d_max: u32,
    /// α-truncation order; defaults to dim + 4.
    #[arg(long)]
    order: Option<i32>,
    /// Draw λ₀ from this seed instead of the canonical sample.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "MIRROR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// ∫ over G(2, n+1) of c_top(Sym^k S*).
    LinesConvex(LinesArgs),
    /// ∫ over G(2, n+1) of c_top(R¹π_*f*O(−k)).
    LinesConcave(LinesArgs),
    /// Graph sum on M_{0,0}(d, ℙⁿ) for d ≤ 2.
    GraphSum {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        bundle: String,
        #[arg(long, default_value_t = 2)]
        d_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// ∫ of a monomial in H_1..H_m.
    Intersection {
        #[arg(long)]
        manifold: String,
        /// Exponents, comma separated.
        #[arg(long, value_delimiter = ',')]
        exponents: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct LinesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: i64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
