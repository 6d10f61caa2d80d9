mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use makhc::Rational;

#[derive(Parser, Debug)]
#[command(name = "makhc", version, about = "Min-max k-hub center on bounded-treewidth graphs")]
struct Cli {
    /// Only log errors.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate with the tree decomposition dynamic program.
    Solve(SolveArgs),
    /// Exact optimum by enumerating hub sets.
    Exact {
        #[arg(long)]
        instance: PathBuf,
        /// Refuse to enumerate more than this many hub sets.
        #[arg(long, default_value_t = makhc::oracle::DEFAULT_CAP)]
        cap: u128,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Greedy 3-approximation.
    Greedy {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Evaluate a given hub set.
    Check {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated 1-based hub ids.
        #[arg(long)]
        hubs: String,
        /// Also test every demand against the bound (1 + epsilon) 2r.
        #[arg(long, requires = "epsilon")]
        r: Option<u64>,
        #[arg(long, value_parser = parse_rational, requires = "r")]
        epsilon: Option<Rational>,
    },
    /// Grid minor and treewidth bounds for planar yes-instances.
    Bound {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file; standard output when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Validate and normalize an instance or a tree decomposition.
    Convert {
        #[arg(long, required_unless_present = "td")]
        instance: Option<PathBuf>,
        /// Checked against the instance when both are given.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// PACE `.td` file; a min-fill decomposition is computed when absent.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Accuracy as P/Q or a decimal; the value is at most (2 + epsilon) OPT.
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    epsilon: Rational,
    /// Store exact distances instead of rounded ones (factor 2).
    #[arg(long)]
    exact_colors: bool,
    /// Use delta = eps / (2 height + 1) instead of the halved default.
    #[arg(long)]
    paper_delta: bool,
    /// Give up after this radius.
    #[arg(long)]
    max_r: Option<u64>,
    /// Rescale heavy weights before the radius loop.
    #[arg(long)]
    rescale: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenFamily {
    /// Every vertex a client and hub location, every edge a demand.
    Vc {
        /// Graph in `p edge` format.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Split every edge in three first; the budget becomes k + |E|.
        #[arg(long)]
        subdivide: bool,
    },
    /// One hub per element, one demand per set.
    Hs {
        /// Set system with `u` and `s` lines.
        #[arg(long)]
        sets: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Self-demands on every vertex of a unit-weight graph.
    Kcenter {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Unweighted grid.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// corners, row-ends or self.
        #[arg(long, default_value = "corners")]
        demands: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Connected random instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        #[arg(long, default_value_t = 10)]
        weight_max: u64,
        #[arg(long, default_value_t = 4)]
        demands: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        hub_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    makhc::arith::parse_rational(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
