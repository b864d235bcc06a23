use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use helicoid_cli::{
    cmd_check, cmd_currents, cmd_envelope, cmd_fan, cmd_oracle, cmd_solve, cmd_sweep, parse_config, CliError,
    Options, EXIT_CHECK_FAILED,
};

/// Radial eigenstates, currents and parameter scans for a charged particle in a
/// twisted screw-dislocation background.
#[derive(Parser)]
#[command(name = "helicoid", version)]
struct Cli {
    /// Configuration file of `key = value` lines (defaults used when omitted)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Number of states, overriding `n_states`
    #[arg(long, global = true)]
    states: Option<usize>,
    /// Suppress the summary on stdout
    #[arg(long, global = true)]
    quiet: bool,
    /// Also write gnuplot scripts next to the tables
    #[arg(long, global = true)]
    plot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Lowest levels and their radial states
    Solve,
    /// Density, reduced currents and the ring current of `state_index`
    Currents,
    /// Levels along `sweep_axis` over `sweep_values`
    Sweep,
    /// Aharonov-Bohm envelope over the flux values in `sweep_values`
    Envelope,
    /// Landau fan over field values and `fan_omega2_values`
    Fan,
    /// Mesh-doubling and box-enlargement convergence test
    Check,
    /// Compare the solver with Numerov shooting and closed forms
    Oracle,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let text = match &cli.config {
        Some(path) => {
            fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?
        }
        None => String::new(),
    };
    let mut config = parse_config(&text)?;
    if let Some(k) = cli.states {
        config.n_states = k;
        config.validate().map_err(CliError::from)?;
    }
    let opts = Options { out_dir: cli.out.clone(), plot: cli.plot };
    let outcome = match cli.command {
        Command::Solve => cmd_solve(&config, &opts),
        Command::Currents => cmd_currents(&config, &opts),
        Command::Sweep => cmd_sweep(&config, &opts),
        Command::Envelope => cmd_envelope(&config, &opts),
        Command::Fan => cmd_fan(&config, &opts),
        Command::Check => cmd_check(&config, &opts),
        Command::Oracle => cmd_oracle(&config, &opts),
    }?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    if !cli.quiet {
        for line in &outcome.summary {
            println!("{line}");
        }
        for file in &outcome.files {
            println!("wrote {}", file.display());
        }
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
