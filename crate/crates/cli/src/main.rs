//! `gkpprep`: batch experiment runner for the grid-state preparation
//! protocols and their verification suites.

mod commands;
mod config;
mod dump;
mod report;
mod rows;

use clap::{Parser, Subcommand, ValueEnum};
use config::Config;
use gkp_core::protocols::Backend;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Grid,
    Gauss,
    Auto,
}

#[derive(Parser, Debug)]
#[command(
    name = "gkpprep",
    version,
    about = "Hybrid qubit-oscillator protocols for grid-state preparation: run, verify, sweep, compile"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Key-value config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Numerical backend.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,

    /// Peak-truncation tolerance for analytic states the CLI builds directly
    /// (protocol internals pin the 1e-12 default).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for randomized suites and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the report document here (also printed to stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Write the bound rows (or sweep rows) as CSV here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Run despite out-of-range protocol parameters (verdicts become
    /// precondition_unmet instead of errors where possible).
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the comb-preparation protocol.
    Comb {
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        rounds: Option<u32>,
        /// Dump the final grid state to this file.
        #[arg(long)]
        dump_state: Option<PathBuf>,
    },
    /// Run the envelope-Gaussification protocol on an exact truncated comb.
    Gaussify {
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long = "L")]
        l: Option<u32>,
        #[arg(long)]
        delta: Option<f64>,
        /// Outcome-grid resolution (defaults to min(0.02, kappa/5)).
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Run the full grid-state preparation protocol.
    Gkp {
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run a named verification suite (formulas|tails|moments|stability|all).
    Verify {
        suite: String,
        /// Comma-separated kappa grid (tails suite).
        #[arg(long)]
        kappa: Option<String>,
        /// Comma-separated delta grid (tails suite).
        #[arg(long)]
        delta: Option<String>,
        /// Comma-separated interval radii (tails suite).
        #[arg(long)]
        r: Option<String>,
        /// Maximum gates per random circuit (moments suite).
        #[arg(long)]
        gates: Option<usize>,
        /// Number of random circuits (moments suite).
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Cartesian parameter sweep of a protocol, one CSV row per cell.
    Sweep {
        /// Protocol to sweep: gkp (default) or comb.
        #[arg(long)]
        protocol: Option<String>,
        /// Comma-separated kappa values.
        #[arg(long)]
        kappa: Option<String>,
        /// Comma-separated delta values.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Compile a displacement or squeezer into bounded-strength gates.
    Compile {
        /// Target translation "dq,dp".
        #[arg(long, allow_hyphen_values = true)]
        displacement: Option<String>,
        /// Total squeezing parameter z.
        #[arg(long)]
        squeeze: Option<f64>,
    },
    /// Run a circuit file on the grid backend from the vacuum.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Check the output against the coherent state at "dq,dp".
        #[arg(long, allow_hyphen_values = true)]
        coherent_target: Option<String>,
        #[arg(long)]
        dump_state: Option<PathBuf>,
    },
}

/// Flag resolution: command line > config file > default.
pub struct Settings {
    pub config: Config,
    pub backend: BackendArg,
    pub tol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub workers: usize,
    pub force: bool,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Settings, String> {
        let config = match &cli.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let backend = match (cli.backend, config.get("backend")) {
            (Some(b), _) => b,
            (None, Some("grid")) => BackendArg::Grid,
            (None, Some("gauss")) => BackendArg::Gauss,
            (None, Some("auto")) | (None, None) => BackendArg::Auto,
            (None, Some(other)) => return Err(format!("config backend '{other}' unknown")),
        };
        Ok(Settings {
            backend,
            tol: cli.tol.or(config.get_parsed("tol")?).unwrap_or(1e-12),
            seed: cli.seed.or(config.get_parsed("seed")?).unwrap_or(7),
            out: cli.out.clone().or_else(|| config.get("out").map(PathBuf::from)),
            csv: cli.csv.clone().or_else(|| config.get("csv").map(PathBuf::from)),
            workers: cli.workers.or(config.get_parsed("workers")?).unwrap_or(1),
            force: cli.force || config.get("force") == Some("true"),
            config,
        })
    }

    /// Effective backend for a protocol whose exact backend is the default.
    pub fn protocol_backend(&self) -> Backend {
        match self.backend {
            BackendArg::Grid => Backend::Grid,
            BackendArg::Gauss | BackendArg::Auto => Backend::GaussianSum,
        }
    }

    pub fn flag_f64(&self, cli_value: Option<f64>, key: &str) -> Result<Option<f64>, String> {
        match cli_value {
            Some(v) => Ok(Some(v)),
            None => self.config.get_parsed(key),
        }
    }
}

/// Exit codes: 0 all verdicts hold/vacuous; 2 usage; 3 a bound violated;
/// 4 numerical capability failure.
fn error_exit_code(e: &gkp_core::Error) -> u8 {
    use gkp_core::Error::*;
    match e {
        Parameter(_) | Usage(_) | Parse(_) => 2,
        Resolution(_) | DomainOverflow(_) | Capability(_) | Capacity(_) | Numeric(_)
        | Precondition(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::resolve(&cli) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Comb { delta, rounds, dump_state } => {
            commands::cmd_comb(&settings, *delta, *rounds, dump_state.as_deref())
        }
        Command::Gaussify { kappa, l, delta, resolution } => {
            commands::cmd_gaussify(&settings, *kappa, *l, *delta, *resolution)
        }
        Command::Gkp { kappa, delta } => commands::cmd_gkp(&settings, *kappa, *delta),
        Command::Verify { suite, kappa, delta, r, gates, trials } => commands::cmd_verify(
            &settings,
            suite,
            kappa.as_deref(),
            delta.as_deref(),
            r.as_deref(),
            *gates,
            *trials,
        ),
        Command::Sweep { protocol, kappa, delta } => {
            commands::cmd_sweep(&settings, protocol.as_deref(), kappa.as_deref(), delta.as_deref())
        }
        Command::Compile { displacement, squeeze } => {
            commands::cmd_compile(&settings, displacement.as_deref(), *squeeze)
        }
        Command::Simulate { circuit, coherent_target, dump_state } => commands::cmd_simulate(
            &settings,
            circuit,
            coherent_target.as_deref(),
            dump_state.as_deref(),
        ),
    };
    match outcome {
        Ok(violated) => {
            if violated {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(commands::CmdError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e))
        }
        Err(commands::CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::CmdError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(4)
        }
    }
}
