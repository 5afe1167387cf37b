//! Command-line driver for the ensemble-qubit simulator: reads one TOML
//! experiment description, runs it and writes CSV/JSON artifacts.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{parse_config, ExperimentConfig};
pub use error::{exit, RunError};
pub use experiments::{run_experiment, Artifacts};

/// Result of a successful run.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    pub warnings: Vec<String>,
    pub written: Vec<PathBuf>,
}

/// Reads, runs and writes one experiment.
///
/// The output directory is `output` if given, else `output.directory` from
/// the config (relative to the config file), else the current directory.
pub fn run(config_path: &Path, output: Option<&Path>) -> Result<Outcome, RunError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|source| RunError::ConfigRead { path: config_path.to_path_buf(), source })?;
    let cfg = parse_config(&text)?;
    let art = run_experiment(&cfg)?;
    let dir = match (output, &cfg.output.directory) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) => config_path.parent().unwrap_or(Path::new(".")).join(d),
        (None, None) => PathBuf::from("."),
    };
    let written = output::write_artifacts(&dir, &cfg.output, &art)?;
    Ok(Outcome { summary: art.summary, warnings: art.warnings, written })
}
