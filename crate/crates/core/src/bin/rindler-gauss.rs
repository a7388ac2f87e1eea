use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rindler_gauss::channel::CovarianceBranch;
use rindler_gauss::cli::{run, RunConfig, RunOptions, Task};

#[derive(Parser)]
#[command(
    version,
    about = "Gaussian channels from inertial to accelerated observers of a massive scalar field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run description (TOML); the built-in default when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides quadrature.abs_tol.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Covariance branch to insist on.
    #[arg(long, global = true, value_enum)]
    branch: Option<Branch>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Build the channel (M, N) and dump it as JSON.
    Channel,
    /// Apply a channel to a state and dump the result as JSON.
    Transform,
    /// Relative-purity surface as CSV.
    Sweep,
    /// Run the check suites and print PASS/FAIL lines.
    Check,
    /// Tabulate K_iν(x) as JSON.
    Specfun,
}

#[derive(ValueEnum, Clone, Copy)]
enum Branch {
    D0,
    Dnonzero,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let task = match cli.command {
        Command::Channel => Task::Channel,
        Command::Transform => Task::Transform,
        Command::Sweep => Task::Sweep,
        Command::Check => Task::Check,
        Command::Specfun => Task::Specfun,
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let config = match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default_config()),
    };
    let options = RunOptions {
        tol: cli.tol,
        branch: cli.branch.map(|b| match b {
            Branch::D0 => CovarianceBranch::DZero,
            Branch::Dnonzero => CovarianceBranch::DNonzero,
        }),
    };
    let output = match config.and_then(|c| run(task, &c, &options)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, &output.text).map_err(|e| format!("failed to write {}: {e}", path.display()))
        }
        None => {
            print!("{}", output.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
