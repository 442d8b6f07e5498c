use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use semilab::config::ConfigValues;
use semilab::experiments::threads_from_env;
use semilab::{run_with_threads, Experiment, LabError, EXIT_USAGE};

/// Numerical experiments on resolvents, semigroups and maximal regularity.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write report.json plus CSV tables.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment to run (may also come from --config).
    #[arg(value_enum)]
    experiment: Option<Experiment>,
    /// Flat `key = value` file with defaults for any of the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    operator: Option<PathBuf>,
    #[arg(long)]
    probes: Option<PathBuf>,
    /// Length of the time interval J = [0, T].
    #[arg(long = "T")]
    t_end: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// `re_min:re_max:n_re:im_min:im_max:n_im` or a list `1+2i,3`.
    #[arg(long = "mu-grid", allow_hyphen_values = true)]
    mu_grid: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    panels: Option<usize>,
}

fn execute(args: RunArgs) -> Result<i32, LabError> {
    let mut values = ConfigValues {
        experiment: args.experiment,
        operator_file: args.operator,
        probe_file: args.probes,
        t_end: args.t_end,
        sigma: args.sigma,
        theta: args.theta,
        p: args.p,
        mu_grid: args.mu_grid,
        output_dir: args.out,
        seed: args.seed,
        panels: args.panels,
    };
    if let Some(path) = &args.config {
        values.fill_from_file(path)?;
    }
    let config = values.resolve()?;
    let outcome = run_with_threads(&config, threads_from_env()?)?;
    for (name, ok) in &outcome.report.pass {
        println!("{name}: {}", if *ok { "pass" } else { "FAIL" });
    }
    println!("report written to {}", config.output_dir.join("report.json").display());
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let Command::Run(args) = cli.command;
    match execute(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
