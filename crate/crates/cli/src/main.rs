//! `fingeo`: JSON in, JSON out.
//!
//! Exit status: 0 when every asserted invariant holds, 1 when one fails (the
//! report is still written), 2 for unreadable or malformed input, 3 when a
//! computation would exceed a cap.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schemars::JsonSchema;
use serde::Serialize;

use fingeo_core::Error;

#[derive(Parser, Serialize, JsonSchema, Debug)]
#[command(
    name = "fingeo",
    version,
    about = "Exact computations with Desarguesian spreads and linear sets"
)]
pub struct Cli {
    /// Write the report here (atomically) instead of to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Cap on enumerated vectors, points and subspaces.
    #[arg(long, global = true, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_enumeration: u64,

    /// Cap on the dimension of dual spaces (`binom(rt−m−1, t)`, `r^t`).
    #[arg(long, global = true, default_value_t = 1 << 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_dual_dim: u64,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print every invariant to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Print the JSON schemas of specs and reports, then exit.
    #[arg(long)]
    #[serde(skip)]
    pub json_schema: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Serialize, JsonSchema, Debug)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Build the Desarguesian spread of PG(rt−1, q) and verify it.
    Spread(SpreadArgs),
    /// Points, weights and block parameters of a linear set.
    Linset(SpecArgs),
    /// Number of linear equations of a linear set on V_rt.
    Codim(CodimArgs),
    /// Linear forms vanishing on the k-spaces that meet a fixed subspace.
    Omega(OmegaArgs),
    /// Exhaustive small cases: the Grassmannian of lines of PG(3,2) and the spread of PG(3,2).
    Selftest,
}

#[derive(Args, Serialize, JsonSchema, Debug)]
pub struct SpreadArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub t: u32,
    /// Checks to run.
    #[arg(long, value_delimiter = ',', default_values_t = SpreadCheck::all())]
    pub verify: Vec<SpreadCheck>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum SpreadCheck {
    /// Size, disjointness and covering.
    Partition,
    /// Rank of the stacked α images.
    Span,
    /// ⟨u, u^σ, …⟩ ∩ Fix σ against field reduction.
    Segre,
    /// Plücker coordinates of field-reduced elements against α.
    Commutation,
    /// Rank-one expansion matrices on the canonical subgeometry.
    RankOne,
}

impl SpreadCheck {
    pub(crate) fn all() -> Vec<SpreadCheck> {
        SpreadCheck::value_variants().to_vec()
    }
}

impl std::fmt::Display for SpreadCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Args, Serialize, JsonSchema, Debug)]
pub struct SpecArgs {
    /// Linear-set spec (JSON).
    pub spec: PathBuf,
}

#[derive(Args, Serialize, JsonSchema, Debug)]
pub struct CodimArgs {
    /// Linear-set spec (JSON).
    pub spec: PathBuf,
    /// Routes to run besides the wedge span, which always runs.
    #[arg(long, value_delimiter = ',', default_values_t = vec![Route::Span, Route::Minors, Route::Points])]
    pub routes: Vec<Route>,
    /// Repetitions of dim_S with random complements and bases.
    #[arg(long, default_value_t = 3)]
    pub complement_trials: usize,
    /// Record per-stage wall-clock times (makes the report nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Span,
    Minors,
    Points,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Args, Serialize, JsonSchema, Debug)]
pub struct OmegaArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Basis of A_1 as a JSON matrix of element codes, e.g. `[[1,0,0,0]]`.
    #[arg(long, conflicts_with = "h")]
    pub basis: Option<String>,
    /// Dimension of a random A_1 (drawn from --seed).
    #[arg(long, required_unless_present = "basis")]
    pub h: Option<usize>,
    /// Check vanishing against every k-subspace (within --max-enumeration).
    #[arg(long)]
    pub exhaustive: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(dir) = std::env::var("FINGEO_CACHE_DIR") {
        fingeo_core::exterior::set_cache_dir(Some(dir.into()));
    }
    if cli.json_schema {
        return match report::write_stdout(&report::schemas()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    let outcome = match command {
        Command::Spread(args) => commands::spread(&cli, args),
        Command::Linset(args) => commands::linset(&cli, args),
        Command::Codim(args) => commands::codim(&cli, args),
        Command::Omega(args) => commands::omega(&cli, args),
        Command::Selftest => commands::selftest(&cli),
    };
    match outcome.and_then(|r| r.emit(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Failures before a report exists.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}
