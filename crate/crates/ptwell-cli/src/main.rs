//! Batch front end for the triple-well toolkit: parameter sweeps,
//! figure-data reproduction, and perturbation reports, emitting CSV tables
//! plus a machine-readable run manifest.

mod config;
mod output;
mod run;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_HELP: &str = "EXIT CODES:
  0  success
  2  invalid usage or flag values
  3  unwritable output path / I/O failure
  4  no exceptional point inside the bracket
  5  requested level is degenerate (use degenerate-check)
  6  partial output after a continuation failure (see manifest notes)
";

#[derive(Parser)]
#[command(
    name = "ptwell",
    version,
    about = "PT-symmetric triple-well sweeps, spectra, stability, and currents",
    after_help = EXIT_HELP
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores; the
    /// PTWELL_THREADS environment variable is used when the flag is absent).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Configuration file with `key = value` lines and `#` comments.
    /// Precedence: flags > config file > built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
struct GammaGridArgs {
    /// Lower end of the gamma grid [default: 0].
    #[arg(long)]
    gamma_min: Option<f64>,
    /// Upper end of the gamma grid [default: 1.5].
    #[arg(long)]
    gamma_max: Option<f64>,
    /// Number of grid points [default: 301].
    #[arg(long)]
    gamma_steps: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linear (U=0) spectral sweep over gamma: one CSV row per point and
    /// branch.
    LinearSweep {
        /// Coupling strength to the middle well.
        #[arg(long)]
        j: Option<f64>,
        #[command(flatten)]
        grid: GammaGridArgs,
        /// Output CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the second-order exceptional point inside a gamma bracket.
    Ep2 {
        #[arg(long)]
        j: Option<f64>,
        /// Bracket "lo,hi" with a real spectrum at lo and a complex one at
        /// hi [default: 0,1.5].
        #[arg(long)]
        bracket: Option<String>,
    },
    /// Kato energy corrections of a non-degenerate level, with partial-sum
    /// errors against exact eigenvalues.
    Kato {
        #[arg(long)]
        j: Option<f64>,
        /// Level index in ascending eigenvalue order (0, 1, 2).
        #[arg(long)]
        level: Option<usize>,
        /// Highest order to tabulate [default: 6].
        #[arg(long)]
        max_order: Option<usize>,
        /// Output CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degenerate clusters, their coupling matrices, and the first-order
    /// PT-survival verdict.
    DegenerateCheck {
        #[arg(long)]
        j: Option<f64>,
        /// Evaluate the coupling matrix in the unnormalized reference basis
        /// (1,-2,1), (1,0,-1) instead of the orthonormal one; the entries
        /// rescale accordingly while the physical rates stay put.
        #[arg(long)]
        paper_basis: bool,
    },
    /// Stationary states of the interacting system over a gamma grid: a
    /// states CSV and a folds CSV.
    Nonlinear {
        #[arg(long)]
        j: Option<f64>,
        /// On-site interaction strength.
        #[arg(long)]
        u: Option<f64>,
        #[command(flatten)]
        grid: GammaGridArgs,
        /// Output CSV for the states table.
        #[arg(long)]
        out_states: Option<PathBuf>,
        /// Output CSV for the detected folds.
        #[arg(long)]
        out_folds: Option<PathBuf>,
    },
    /// Currents of every stationary state over a gamma grid.
    Currents {
        #[arg(long)]
        j: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[command(flatten)]
        grid: GammaGridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit one of the standard figure datasets as a directory of panel
    /// CSVs plus manifest.json: 2 = linear spectra over gamma, 3 = net
    /// currents, 4 = channel ratios, 5 = interacting stationary states
    /// with folds, 6 = stable currents versus interaction strength.
    Fig {
        /// Figure number, 2 through 6.
        #[arg(long)]
        n: Option<u32>,
        /// Output directory, created if missing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let conf = match config::Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => return e.report(),
    };
    let threads = cli
        .threads
        .or_else(|| conf.get_usize("threads").ok().flatten())
        .or_else(|| {
            std::env::var("PTWELL_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        });
    init_thread_pool(threads);
    let result = match cli.command {
        Command::LinearSweep { j, grid, out } => run::linear_sweep(&conf, j, &grid, out),
        Command::Ep2 { j, bracket } => run::ep2(&conf, j, bracket),
        Command::Kato {
            j,
            level,
            max_order,
            out,
        } => run::kato(&conf, j, level, max_order, out),
        Command::DegenerateCheck { j, paper_basis } => run::degenerate_check(&conf, j, paper_basis),
        Command::Nonlinear {
            j,
            u,
            grid,
            out_states,
            out_folds,
        } => run::nonlinear(&conf, j, u, &grid, out_states, out_folds),
        Command::Currents { j, u, grid, out } => run::currents(&conf, j, u, &grid, out),
        Command::Fig { n, out_dir } => run::fig(&conf, n, out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

#[cfg(feature = "parallel")]
fn init_thread_pool(threads: Option<usize>) {
    if let Some(n) = threads {
        // a failure here only means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn init_thread_pool(_threads: Option<usize>) {}

/// Errors carrying the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    NoEp(String),
    DegenerateLevel(String),
    Partial(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::NoEp(_) => 4,
            CliError::DegenerateLevel(_) => 5,
            CliError::Partial(_) => 6,
        }
    }

    fn report(&self) -> ExitCode {
        let msg = match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::NoEp(m)
            | CliError::DegenerateLevel(m)
            | CliError::Partial(m) => m,
        };
        eprintln!("ptwell: {msg}");
        ExitCode::from(self.code())
    }
}
