//! `ancomb` command-line harness: one subcommand per library module plus
//! `verify`, which reruns closed-form against oracle comparisons.
//!
//! Output goes to stdout as JSON lines (default) or CSV; diagnostics go to
//! stderr. Exit codes: 0 success, 1 a verification failed, 2 usage or
//! parameter error.

pub mod format;
mod commands;
pub mod verify;

use std::io::Write;

use clap::{Args, Parser, Subcommand};

use format::{write_rows, Format, Row};
use verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "ancomb", version, about = "Exact combinatorial formulas checked against independent oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    /// Print rationals as decimals with this many digits instead of "num/den".
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Register (Horton–Strahler) census of binary trees.
    Register(RegisterArgs),
    /// Morris approximate counter: level distribution, mean, simulation.
    Morris(MorrisArgs),
    /// Probabilistic counting: q(n,k) table, mean of R, simulation, sketch.
    Fm(FmArgs),
    /// Digital search tree endnodes.
    Dst(DstArgs),
    /// Level-number sequences.
    Slices(SlicesArgs),
    /// Alternating binomial sums and Euler sums.
    Sums(SumsArgs),
    /// Ramanujan's Q and R functions.
    Ramanujan(RamanujanArgs),
    /// Binary digit functions, Gray code, merge sum, Mellin–Perron checks.
    Digits(DigitsArgs),
    /// Run oracle comparisons and report each one.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct RegisterArgs {
    #[arg(long)]
    n: u64,
    /// Restrict the census to one register value.
    #[arg(long)]
    p: Option<u32>,
    /// Count by enumerating every tree instead of the closed formula.
    #[arg(long)]
    enumerate: bool,
    /// Mean register value instead of the census.
    #[arg(long)]
    mean: bool,
}

#[derive(Args, Debug)]
struct MorrisArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    mean: bool,
    /// Simulate this many counters instead of the exact distribution.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug)]
struct FmArgs {
    #[arg(long)]
    n: u64,
    /// Largest k in the q(n,k) table.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    mean: bool,
    /// Feed n distinct items into one sketch and print its bitmap.
    #[arg(long)]
    sketch: bool,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct DstArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Expected endnode count.
    #[arg(long)]
    mean: bool,
    /// The linear constant and its ingredients.
    #[arg(long)]
    constant: bool,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
struct SlicesArgs {
    #[arg(long)]
    n: u64,
    /// Pole, amplitude and growth rate at n.
    #[arg(long)]
    report: bool,
    /// Truncation order for the slice iteration check.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug)]
struct SumsArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Largest exponent m.
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Euler sums S_{p,q} instead of binomial sums.
    #[arg(long)]
    euler: bool,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args, Debug)]
struct RamanujanArgs {
    #[arg(long)]
    n: u64,
}

#[derive(Args, Debug)]
struct DigitsArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Merge sums for 1..=n.
    #[arg(long)]
    merge: bool,
    /// Delange's periodic part for 1..=n.
    #[arg(long)]
    delange: bool,
    /// Run the Mellin–Perron battery.
    #[arg(long)]
    perron: bool,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override every Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
}

/// What a subcommand produced.
pub(crate) struct Outcome {
    rows: Vec<Row>,
    failed: bool,
}

impl Outcome {
    fn ok(rows: Vec<Row>) -> Self {
        Outcome { rows, failed: false }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes to
/// the given streams. Returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Register(a) => commands::register(a),
        Command::Morris(a) => commands::morris(a),
        Command::Fm(a) => commands::fm(a),
        Command::Dst(a) => commands::dst(a),
        Command::Slices(a) => commands::slices(a),
        Command::Sums(a) => commands::sums(a),
        Command::Ramanujan(a) => commands::ramanujan(a),
        Command::Digits(a) => commands::digits(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = write_rows(out, &outcome.rows, cli.format, cli.decimal) {
                let _ = writeln!(err, "error: writing output: {e}");
                return 2;
            }
            if outcome.failed {
                let _ = writeln!(err, "verification failed");
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run_with(argv, &mut out, &mut stderr.lock());
    if out.flush().is_err() {
        return 2;
    }
    code
}
