//! `parabolic`: JSON front end for parabolic-core.

mod commands;
mod json;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parabolic_core::rational::parse_q;
use parabolic_core::{Limits, Q};

#[derive(Parser, Debug)]
#[command(
    name = "parabolic",
    version,
    about = "Exact computations for rank-2 parabolic bundles on P^1"
)]
pub struct Cli {
    /// Largest total weight Σk_i accepted by path enumeration and the section oracle.
    #[arg(long, global = true, default_value_t = Limits::default().max_weight_sum)]
    max_weight_sum: u64,
    /// Largest number of marked points accepted by subset scans.
    #[arg(long, global = true, default_value_t = Limits::default().max_n)]
    max_n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Fusion,
    Paths,
    Sections,
}

#[derive(Args, Debug)]
pub struct BlockArgs {
    #[arg(long)]
    pub level: u32,
    /// Comma-separated k_i, e.g. 1,1,1,1.
    #[arg(long, value_delimiter = ',', required = true)]
    pub shape: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct WeightArgs {
    /// Comma-separated rationals in (0,1), e.g. 1/3,1/3,1/3,1/3,1/3.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_rational)]
    pub weight: Vec<Q>,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    /// Coefficients b_1,…,b_n of the pulled-back boundary classes.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = parse_rational)]
    pub b: Vec<Q>,
    /// Coefficient of the exceptional divisor, entered as −t E.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
    pub t: Q,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank of the conformal-block bundle V_ℓ(k).
    Rank {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, value_enum, default_value_t = Method::Fusion)]
        method: Method,
    },
    /// Enumerate the double sequences of a given level and shape.
    Paths {
        #[command(flatten)]
        block: BlockArgs,
    },
    /// Lower a double sequence of height at least 2 by one level.
    Surgery {
        #[arg(long)]
        level: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        top: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        bottom: Vec<u32>,
    },
    /// Write an effective integral class as a sum of cone generators.
    Decompose {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// List the generators of the effective cone for n points.
    Generators {
        #[arg(long)]
        n: usize,
    },
    /// Extremality certificate for E (no --subset) or G_I.
    Certify {
        #[arg(long)]
        n: usize,
        /// 1-based even subset I.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<u32>>,
    },
    /// GIT stability of a point configuration.
    Stability {
        #[command(flatten)]
        weight: WeightArgs,
        /// Coincident points as 1-based blocks, e.g. "1,2;3;4;5". Default: all distinct.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Effectiveness, genericity and Picard rank of a linearization.
    ClassifyWeight {
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Walls Δ_{I,m} containing the weight.
    Walls {
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Walls crossed by the ray c·w for c ≥ 1.
    Walk {
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// The theta divisor class of a weight.
    Theta {
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// The birational model attached to an effective class.
    ClassifyModel {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Facets of the GIT effective cone, with optional membership of --b.
    GitCone {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        b: Option<Vec<Q>>,
    },
    /// Run the small-instance invariant suites.
    Selftest,
}

fn parse_rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits {
        max_weight_sum: cli.max_weight_sum,
        max_n: cli.max_n,
    };
    commands::run(&cli.command, &limits)
}
