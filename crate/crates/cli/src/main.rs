//! `coopcap`: bounds, achievable rates and verification sweeps for the
//! two-user interference channel with source cooperation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "coopcap", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Write the per-case output (CSV or JSON) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random sweeps and message draws.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Print the summary as JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds, regime and achievable sum rate of one linear deterministic channel.
    LdCapacity(commands::LdCapacityArgs),
    /// Checks achievable == capacity over the exhaustive level grid.
    LdVerify(commands::LdVerifyArgs),
    /// Simulates one of the three uncoded example schemes.
    LdSim(commands::LdSimArgs),
    /// Full report for one Gaussian channel.
    GaussReport(commands::GaussReportArgs),
    /// Random Gaussian sweep of the gap between bound and achievable rate.
    ///
    /// Each link's power |h|^2 is drawn uniformly in dB over
    /// [--db-min, --db-max] and the phase uniformly on [0, 2π).
    GaussGap(commands::GaussGapArgs),
    /// Symmetric feedback channel: bound, achievable rate and gap.
    Feedback(commands::FeedbackArgs),
    /// Normalized symmetric sum capacity against the cooperation exponent.
    Fig2(commands::Fig2Args),
    /// Compares source- and destination-cooperation bounds.
    Reversibility(commands::ReversibilityArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let c = &cli.common;
    let res = match &cli.command {
        Command::LdCapacity(a) => commands::ld_capacity(c, a),
        Command::LdVerify(a) => commands::ld_verify(c, a),
        Command::LdSim(a) => commands::ld_sim(c, a),
        Command::GaussReport(a) => commands::gauss_report(c, a),
        Command::GaussGap(a) => commands::gauss_gap(c, a),
        Command::Feedback(a) => commands::feedback(c, a),
        Command::Fig2(a) => commands::fig2(c, a),
        Command::Reversibility(a) => commands::reversibility(c, a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
