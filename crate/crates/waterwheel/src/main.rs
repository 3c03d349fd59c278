//! Command-line scenario runner.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 I/O failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use waterwheel::config::ScenarioConfig;
use waterwheel::runner::{run_scenario, run_suite};

#[derive(Parser)]
#[command(
    name = "waterwheel",
    about = "Water wheel scenario simulator and competitive-modes analyzer",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its data files.
    Run(RunArgs),
    /// Run all six bundled (scenario, x0) combinations with defaults.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file of `key = value` lines; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// unsteady-asymmetric | unsteady-symmetric | steady-asymmetric
    #[arg(long)]
    scenario: Option<String>,
    /// Initial angular velocity x(0).
    #[arg(long)]
    x0: Option<f64>,
    /// End of the integration span [0, t-end].
    #[arg(long)]
    t_end: Option<f64>,
    /// rk4-fixed | rk45-adaptive
    #[arg(long)]
    method: Option<String>,
    /// Fixed RK4 step.
    #[arg(long)]
    step: Option<f64>,
    /// Adaptive relative tolerance.
    #[arg(long)]
    rtol: Option<f64>,
    /// Adaptive absolute tolerance.
    #[arg(long)]
    atol: Option<f64>,
    /// Output grid spacing.
    #[arg(long)]
    sample_interval: Option<f64>,
    /// Competitive-event tolerance.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Region grid x bounds, lo:hi.
    #[arg(long)]
    grid_x: Option<String>,
    /// Region grid z bounds, lo:hi.
    #[arg(long)]
    grid_z: Option<String>,
    /// Region grid resolution per axis.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Instant of the region snapshot.
    #[arg(long)]
    snapshot_tau: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Base output directory; one subdirectory per combination.
    #[arg(long, default_value = "suite-out")]
    out: PathBuf,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => match build_config(&args) {
            Ok(config) => match run_scenario(&config) {
                Ok(summary) => {
                    println!(
                        "{} x0={} -> {} (events: {}, lyapunov: {:.4})",
                        summary.kind,
                        summary.x0,
                        config.out_dir.display(),
                        summary.event_count,
                        summary.lyapunov.exponent
                    );
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            },
            Err(message) => {
                eprintln!("error: {message}");
                1
            }
        },
        Command::Suite(args) => match run_suite(&args.out) {
            Ok(summaries) => {
                for s in &summaries {
                    println!(
                        "{} x0={}: x switches {}, lyapunov {:.4}",
                        s.kind, s.x0, s.x_sign_switches, s.lyapunov.exponent
                    );
                }
                println!("suite written to {}", args.out.display());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    }
}

/// Defaults, then config file, then flags.
fn build_config(args: &RunArgs) -> Result<ScenarioConfig, String> {
    let mut config = ScenarioConfig::default();
    if let Some(path) = &args.config {
        config.apply_file(path).map_err(|e| e.to_string())?;
    }
    if let Some(v) = &args.scenario {
        config.set("scenario", v)?;
    }
    if let Some(v) = args.x0 {
        config.x0 = v;
    }
    if let Some(v) = args.t_end {
        config.set("t-end", &v.to_string())?;
    }
    if let Some(v) = &args.method {
        config.set_method(v)?;
    }
    if let Some(v) = args.step {
        config.set("integrator.step", &v.to_string())?;
    }
    if let Some(v) = args.rtol {
        config.set("integrator.rtol", &v.to_string())?;
    }
    if let Some(v) = args.atol {
        config.set("integrator.atol", &v.to_string())?;
    }
    if let Some(v) = args.sample_interval {
        config.set("integrator.sample-interval", &v.to_string())?;
    }
    if let Some(v) = args.epsilon {
        config.set("epsilon", &v.to_string())?;
    }
    if let Some(v) = &args.grid_x {
        config.set("region.grid-x", v)?;
    }
    if let Some(v) = &args.grid_z {
        config.set("region.grid-z", v)?;
    }
    if let Some(v) = args.grid_n {
        config.set("region.grid-n", &v.to_string())?;
    }
    if let Some(v) = args.snapshot_tau {
        config.set("region.snapshot-tau", &v.to_string())?;
    }
    if let Some(v) = &args.out {
        config.out_dir = v.clone();
    }
    Ok(config)
}
