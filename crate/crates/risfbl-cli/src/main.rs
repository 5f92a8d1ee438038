use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use risfbl_cli::commands::{cmd_rate_vs_d, cmd_rate_vs_n, cmd_snr_cdf, default_d_grid, default_n_list};
use risfbl_cli::config::{load_scenario, serialize_scenario};
use risfbl_cli::validate::{render_report, run_suite, suite_passed, ValidationBudget};
use risfbl_cli::parse_modes;
use risfbl_core::ScenarioConfig;

/// Analytical and Monte Carlo rate curves for a reflecting-surface-aided
/// short-packet link.
#[derive(Parser)]
#[command(name = "risfbl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario config file (key = value sections); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the run seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the surface element count.
    #[arg(long)]
    n_elements: Option<usize>,
    /// Override the surface x-position in meters.
    #[arg(long)]
    ris_d: Option<f64>,
    /// Override direct-link presence.
    #[arg(long)]
    direct_link: Option<bool>,
    /// Monte Carlo worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical SNR CDFs per phase mode plus the matched-Gamma CDF.
    SnrCdf {
        #[command(flatten)]
        common: CommonArgs,
        /// Phase modes: comma list of `perfect`, `unadjusted`, or bit counts.
        #[arg(long, default_value = "perfect,1,2,3")]
        modes: String,
        /// Points on the shared dB axis.
        #[arg(long, default_value_t = 512)]
        grid_points: usize,
    },
    /// Average rate against the surface element count.
    RateVsN {
        #[command(flatten)]
        common: CommonArgs,
        /// Ascending element counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Monte Carlo phase modes to add as columns.
        #[arg(long, default_value = "perfect,1,2")]
        modes: String,
    },
    /// Average rate against the surface placement d (both link variants).
    RateVsD {
        #[command(flatten)]
        common: CommonArgs,
        /// Placement grid in meters within [5, 95], comma separated.
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<f64>>,
        /// Monte Carlo phase modes to add as columns.
        #[arg(long, default_value = "perfect,1,2")]
        modes: String,
    },
    /// Runs the validation suite and writes its report.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Tamper the matched Gamma shape to demonstrate the KS check fails.
        #[arg(long)]
        negative_control: bool,
    },
    /// Prints the effective scenario config (defaults + file + flags).
    ShowConfig {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn effective_scenario(common: &CommonArgs) -> Result<ScenarioConfig, String> {
    let mut sc = match &common.config {
        Some(path) => load_scenario(path).map_err(|e| e.to_string())?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = common.seed {
        sc.seed = seed;
    }
    if let Some(samples) = common.samples {
        if samples == 0 {
            return Err("samples must be ≥ 1".into());
        }
        sc.samples = samples;
    }
    if let Some(n) = common.n_elements {
        if n == 0 {
            return Err("n_elements must be ≥ 1".into());
        }
        sc.n_elements = n;
    }
    if let Some(d) = common.ris_d {
        sc.ris_pos[0] = d;
    }
    if let Some(direct) = common.direct_link {
        sc.direct_link = direct;
    }
    Ok(sc)
}

fn emit(common: &CommonArgs, text: &str) -> Result<(), String> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Outcome {
    Ok,
    ValidationFailed,
}

fn run() -> Result<Outcome, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::SnrCdf { common, modes, grid_points } => {
            let sc = effective_scenario(&common)?;
            let modes = parse_modes(&modes)?;
            if grid_points < 2 {
                return Err("grid_points must be ≥ 2".into());
            }
            let out = cmd_snr_cdf(&sc, &modes, common.workers, grid_points)
                .map_err(|e| e.to_string())?;
            emit(&common, &out.to_csv())?;
            Ok(Outcome::Ok)
        }
        Command::RateVsN { common, n, modes } => {
            let sc = effective_scenario(&common)?;
            let modes = parse_modes(&modes)?;
            let n_list = n.unwrap_or_else(default_n_list);
            let out =
                cmd_rate_vs_n(&sc, &n_list, &modes, common.workers).map_err(|e| e.to_string())?;
            emit(&common, &out.to_csv())?;
            Ok(Outcome::Ok)
        }
        Command::RateVsD { common, d, modes } => {
            let sc = effective_scenario(&common)?;
            let modes = parse_modes(&modes)?;
            let d_grid = d.unwrap_or_else(default_d_grid);
            let out =
                cmd_rate_vs_d(&sc, &d_grid, &modes, common.workers).map_err(|e| e.to_string())?;
            emit(&common, &out.to_csv())?;
            Ok(Outcome::Ok)
        }
        Command::Validate { common, negative_control } => {
            let sc = effective_scenario(&common)?;
            let budget = match common.samples {
                Some(s) => ValidationBudget::from_mc_samples(s),
                None => ValidationBudget::default(),
            };
            let results = run_suite(&sc, &budget, common.workers, negative_control);
            for r in &results {
                eprintln!("criterion {:>2} ({}) took {:.2?}", r.id, r.name, r.elapsed);
            }
            let report = render_report(&results, &sc, &budget, common.workers, negative_control);
            emit(&common, &report)?;
            if suite_passed(&results) {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::ValidationFailed)
            }
        }
        Command::ShowConfig { common } => {
            let sc = effective_scenario(&common)?;
            emit(&common, &serialize_scenario(&sc))?;
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
