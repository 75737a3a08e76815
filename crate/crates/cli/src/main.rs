//! Command line front end: generate noisy block graphs, cluster them,
//! sweep the robustness benchmark, and plot the resulting curves.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod bench;
mod cluster;
mod generate;
mod plot;

#[derive(Parser, Debug)]
#[command(
    name = "l1spectral",
    version,
    about = "Cluster noisy graphs by spectral methods with an l1 sparsity stage"
)]
enum Cli {
    /// Generate a perturbed block graph and write it to disk.
    Generate(generate::GenerateArgs),
    /// Cluster a graph file and write per-node labels.
    Cluster(cluster::ClusterArgs),
    /// Sweep the edge-flip probability and record both algorithms.
    Bench(bench::BenchArgs),
    /// Render a curves CSV as a self-contained SVG.
    Plot(plot::PlotArgs),
}

/// Exit codes are a stable contract: 0 success, 1 I/O, 2 usage or
/// validation, 3 solver failure.
fn exit_code(err: &l1spectral::Error) -> u8 {
    use l1spectral::Error;
    match err {
        Error::Io(_) | Error::Csv(_) => 1,
        Error::InvalidInput(_) | Error::Parse { .. } | Error::IsolatedNode { .. } => 2,
        Error::SolverFailure { .. } | Error::NonConvergence { .. } => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli {
        Cli::Generate(args) => generate::run(&args),
        Cli::Cluster(args) => cluster::run(&args),
        Cli::Bench(args) => bench::run(&args),
        Cli::Plot(args) => plot::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
