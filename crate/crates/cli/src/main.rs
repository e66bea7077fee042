use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use contact_lab_cli::{
    check_profiles, parse_vary, parse_with_overrides, run_scenario, sweep, Summary,
};

#[derive(Parser)]
#[command(
    name = "contact-lab",
    version,
    about = "Stability experiments for viscous contact and rarefaction waves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario of a configuration file.
    Run {
        config: PathBuf,
        /// Override a configuration key, e.g. `--set grid.nodes=801`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run one configuration per value of a key, concurrently.
    Sweep {
        config: PathBuf,
        /// Key and comma-separated values, e.g. `--vary gas.gamma=1.4,2`.
        #[arg(long, value_name = "KEY=V1,V2,...")]
        vary: String,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Evaluate the wave-profile property checks without time stepping.
    CheckProfiles {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_summary(label: &str, s: &Summary) {
    if let Some(run) = &s.run {
        println!(
            "{label}: t = {}, sup peak {:.4e}, sup final {:.4e}, decay ratio {:.4}",
            run.final_norms.t, run.peak.sup, run.final_norms.sup, run.decay_ratio
        );
    }
    for (name, ok) in s.checks.verdicts() {
        println!("{label}: {} {name} check", if ok { "PASS" } else { "FAIL" });
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, set } => {
            let c = parse_with_overrides(&read(&config)?, &set)?;
            let s = run_scenario(&c)?;
            print_summary(&c.output.display().to_string(), &s);
        }
        Command::CheckProfiles { config, set } => {
            let c = parse_with_overrides(&read(&config)?, &set)?;
            let s = check_profiles(&c)?;
            print_summary(&c.output.display().to_string(), &s);
        }
        Command::Sweep { config, vary, set } => {
            let (key, values) = parse_vary(&vary)?;
            let mut failed = Vec::new();
            for (value, result) in sweep(&read(&config)?, &set, &key, &values)? {
                let label = format!("{key}={value}");
                match result {
                    Ok(s) => print_summary(&label, &s),
                    Err(e) => {
                        println!("{label}: error: {e:#}");
                        failed.push(label);
                    }
                }
            }
            if !failed.is_empty() {
                anyhow::bail!(
                    "{} of {} sweep runs failed ({})",
                    failed.len(),
                    values.len(),
                    failed.join(", ")
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let cause = format!("{e:#}");
            eprintln!(
                "error: {}",
                cause.split_whitespace().collect::<Vec<_>>().join(" ")
            );
            ExitCode::FAILURE
        }
    }
}
