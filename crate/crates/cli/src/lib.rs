//! Configuration-driven runner for the contact-lab experiments.

pub mod config;
pub mod runner;

use anyhow::{anyhow, Result};
use rayon::prelude::*;

pub use config::{parse_config, parse_with_overrides, RunConfig, Scenario};
pub use runner::{check_profiles, run_scenario, Summary};

/// Splits `key=v1,v2,...` into the key and its values.
pub fn parse_vary(spec: &str) -> Result<(String, Vec<String>)> {
    let (key, values) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("--vary `{spec}` is not of the form key=v1,v2,..."))?;
    let values: Vec<String> = values
        .split(',')
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    if values.is_empty() {
        return Err(anyhow!("--vary `{spec}` lists no values"));
    }
    Ok((key.trim().to_string(), values))
}

/// Runs one configuration per value of `key`, concurrently, each writing
/// into its own subdirectory of the configured output directory. Results
/// are returned in the order of `values`.
pub fn sweep(
    text: &str,
    overrides: &[String],
    key: &str,
    values: &[String],
) -> Result<Vec<(String, Result<Summary>)>> {
    let base = parse_with_overrides(text, overrides)?;
    let configs = values
        .iter()
        .map(|value| {
            let mut all = overrides.to_vec();
            all.push(format!("{key}={value}"));
            let dir = runner::sweep_dir(&base.output, key, value);
            all.push(format!(
                "output={}",
                toml::Value::String(dir.display().to_string())
            ));
            parse_with_overrides(text, &all).map(|c| (value.clone(), c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(configs
        .into_par_iter()
        .map(|(value, config)| (value, run_scenario(&config)))
        .collect())
}
