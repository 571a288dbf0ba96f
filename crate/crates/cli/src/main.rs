//! Experiments on value sets of polynomials modulo primes, permutation
//! group densities, and larger-sieve bounds, from the command line.
//!
//! Every subcommand writes `summary.json` with full provenance (seed,
//! tolerances, version) plus plot-ready CSV artifacts into `--out`. Output
//! bytes depend only on the resolved configuration and the seed, never on
//! the worker count. Exit codes: 0 all checks passed, 1 a check failed,
//! 2 usage or configuration error, 3 resource budget exceeded.

mod config;
mod output;
mod parse;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Failures split by exit code: usage and configuration problems exit 2,
/// exceeded resource budgets exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
}

#[derive(Parser)]
#[command(
    name = "valset",
    version,
    about = "Value-set statistics of polynomials modulo primes, group densities, and larger-sieve bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat JSON config file mirroring the long flags; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Seed for every randomized component.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Tolerance override for this command's checks, e.g. 0.05 or 1/20.
    #[arg(long, global = true)]
    pub tolerance: Option<String>,

    /// Worker thread count; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory that receives summary.json and the CSV artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Per-prime value-set and pair statistics of a polynomial.
    Stats {
        /// Polynomial over x (univariate) or x, y, z (multivariate).
        #[arg(long)]
        poly: Option<String>,
        /// Sweep all primes p <= qmax.
        #[arg(long)]
        qmax: Option<u64>,
        /// Point budget per prime for multivariate enumeration.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Running average of a statistic against its limit, as a check.
    Avg {
        /// Polynomial over x, or over x, y, z for the multi check.
        #[arg(long)]
        poly: Option<String>,
        /// Sweep all primes p <= qmax.
        #[arg(long)]
        qmax: Option<u64>,
        /// One of: alpha-inv, pair-mean, multi, indecomposable, alpha-group.
        #[arg(long)]
        check: Option<String>,
        /// Irreducible factor count target; computed when omitted.
        #[arg(long, alias = "s")]
        factors: Option<u64>,
        /// Group for alpha-group: wreath:N, a name like d4, or cycles.
        #[arg(long)]
        group: Option<String>,
        /// Point budget per prime for the multi check.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// The iterated squaring family: exact densities, thresholds, sweeps.
    Family {
        /// Family index n (f_1 = x^2, f_{n+1} = (f_n + 1)^2).
        #[arg(long)]
        n: Option<u32>,
        /// Also sweep alpha_p over primes in (threshold, qmax].
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Permutation group reports: density, rank, order, orbit count.
    Group {
        /// Wreath tower level; enumerated exactly while feasible.
        #[arg(long)]
        wreath_n: Option<u32>,
        /// A named group: s2..s6, a4, d4, c4.
        #[arg(long)]
        named: Option<String>,
        /// Comma-separated generators in cycle notation, e.g. "(1 2),(1 2 3)".
        #[arg(long)]
        gens: Option<String>,
        /// Exact fixed-point density of the symmetric group S_d.
        #[arg(long)]
        symmetric: Option<u32>,
        /// Sample count used when the group is too large to enumerate.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Factor a polynomial over the integers; optionally count the
    /// irreducible factors of f(x) - f(y) and cross-check them.
    Factor {
        /// Univariate polynomial over x.
        #[arg(long)]
        poly: Option<String>,
        /// Count irreducible factors of f(x) - f(y) by specialization.
        #[arg(long)]
        bivariate: bool,
        /// Specialization trials for --bivariate (at least 3).
        #[arg(long)]
        trials: Option<u64>,
        /// Cross-check the count against the mean pair statistic.
        #[arg(long)]
        cross_check: bool,
        /// Sweep limit for --cross-check.
        #[arg(long)]
        qmax: Option<u64>,
        /// Group whose rank joins the cross-check: wreath:N, d4, cycles.
        #[arg(long)]
        group: Option<String>,
    },
    /// Evaluate the larger sieve on an explicit set.
    Sieve {
        /// Set spec: powers:d, poly:<expr>, or a set file path.
        #[arg(long)]
        set: Option<String>,
        /// Window [1, N] for generated sets.
        #[arg(long, alias = "N")]
        n: Option<u64>,
        /// Sieve with all primes up to this cutoff.
        #[arg(long, alias = "Q")]
        q: Option<u64>,
        /// Comma-separated cutoff grid to optimize over.
        #[arg(long)]
        q_grid: Option<String>,
        /// Also export the resolved set to this path.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Smooth content of pairwise differences of a set.
    Smooth {
        /// Set spec: powers:d, poly:<expr>, or a set file path.
        #[arg(long)]
        set: Option<String>,
        /// Window [1, N] for generated sets.
        #[arg(long, alias = "N")]
        n: Option<u64>,
        /// Smoothness cutoff Q.
        #[arg(long, alias = "Q")]
        q: Option<u64>,
        /// Pair sample cap (all pairs when they number fewer).
        #[arg(long)]
        sample_cap: Option<u64>,
        /// Split S across cyclotomic factors for exact d-th power sets;
        /// inferred automatically for powers:d specs.
        #[arg(long)]
        power_degree: Option<u32>,
    },
    /// Exact size of [1, N] intersected with the integer value set of f.
    Intersect {
        /// Univariate polynomial over x, degree at least two.
        #[arg(long)]
        poly: Option<String>,
        /// Window [1, N].
        #[arg(long, alias = "N")]
        n: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
