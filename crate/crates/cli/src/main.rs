//! `patsort`: command-line access to pattern containment, touch matrices,
//! the lower-bound construction, extremal search and the bound formulas.
//!
//! Exit status is 0 on success, 1 on bad input or arguments and 2 when a
//! property that should hold turns out not to.

mod bench;
mod cache;
mod cmd;
mod io;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "patsort", version, about = "Pattern-avoiding sorting toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a permutation file avoids a pattern (exit 2 if it does not).
    CheckAvoid {
        /// Permutation file, one value per line.
        #[arg(long = "s")]
        s: PathBuf,
        /// Pattern, e.g. 231 or 2,3,1.
        #[arg(long)]
        pi: String,
    },
    /// Report whether a host matrix contains a pattern.
    Contains {
        /// Pattern name (hat, w, id3, kron:231, ...) or m01 file.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        host: PathBuf,
        /// Trim `A,B` columns off the pattern and use trimmed containment.
        #[arg(long, value_parser = parse_trim)]
        trim: Option<(usize, usize)>,
    },
    /// Kronecker product of a pattern with a small gadget.
    Kron {
        #[arg(long)]
        pattern: String,
        #[arg(long, value_enum, default_value_t = Gadget::Hat)]
        with: Gadget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Touch matrix of Greedy or SmoothHeap on a permutation file.
    Touch {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-step touch counts as CSV.
        #[arg(long)]
        counts: Option<PathBuf>,
        /// If the input avoids this pattern, require the matching Q to be absent.
        #[arg(long)]
        pi: Option<String>,
    },
    /// Build the blocked sequence U(i, j).
    ConstructU {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Largest predicted length to build.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out_seq: Option<PathBuf>,
        #[arg(long)]
        out_matrix: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Extremal function Ex(Q, n, m), exact or heuristic.
    Exf {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        /// Randomised saturation lower bound instead of exact search.
        #[arg(long)]
        heuristic: bool,
        /// Seconds before the exact search gives up and reports its best.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Lift the exact-search size guard.
        #[arg(long)]
        force: bool,
        #[arg(long, value_parser = parse_trim)]
        trim: Option<(usize, usize)>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20)]
        rounds: usize,
        /// Result cache (JSON table) for exact values.
        #[arg(long, env = "PATSORT_CACHE")]
        cache: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse Ackermann alpha(n, m).
    Alpha {
        #[arg(long)]
        n: String,
        #[arg(long)]
        m: String,
    },
    /// Ackermann table entry a(i, j), saturated at a cap.
    Ack {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: u64,
        /// Decimal or `2^k`.
        #[arg(long, default_value = "2^1024")]
        cap: String,
    },
    /// Tabulate mu(i, t) or check its constraints.
    Mu {
        #[arg(long = "C", default_value_t = 64)]
        c: u64,
        #[arg(long)]
        i_max: u32,
        #[arg(long)]
        t_max: u32,
        #[arg(long)]
        k: Option<u32>,
        /// Check the constraints instead of printing values (exit 2 on a violation).
        #[arg(long)]
        check: bool,
        /// Use f64 instead of exact rationals.
        #[arg(long)]
        float: bool,
    },
    /// Join two patterns at a shared corner.
    Join {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove 1s from a matrix by a fixed rule.
    Reduce {
        #[arg(long, value_enum)]
        op: ReduceOp,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on one generated input and emit a JSON record.
    Bench {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        seed: Option<u64>,
        /// Runs for the k-increasing class.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Append to this JSON-lines file instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock time in the record.
        #[arg(long)]
        timing: bool,
    },
    /// Classify the 1s of a matrix by slabs and blocks.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        g: usize,
        /// Permutation P; when the input avoids P (x) hat, the contracted matrices are checked.
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a permutation file.
    Gen {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        pi: Option<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Greedy,
    Smooth,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    Hat,
    Vpair,
    Hpair,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceOp {
    TopPerColumn,
    FirstPerRow,
    LastPerRow,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Sequential,
    Preorder,
    Postorder,
    Deque,
    KIncreasing,
    Uniform,
    /// Uniform samples resampled until they avoid `--pi`.
    Rejection,
}

fn parse_trim(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

/// A property that should have held was found to fail.
#[derive(Debug)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cmd::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<Violation>() {
            Some(v) => {
                eprintln!("violation: {v}");
                ExitCode::from(2)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
