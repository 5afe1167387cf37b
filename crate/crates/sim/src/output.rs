use std::fs;
use std::path::{Path, PathBuf};

use crate::config::OutputConfig;
use crate::error::RunError;
use crate::experiments::Artifacts;

/// Writes whichever artifacts the run produced into `dir`, returning the
/// paths in a fixed order: trajectory, report, sweep.
pub fn write_artifacts(dir: &Path, names: &OutputConfig, art: &Artifacts) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(|source| RunError::Output { path: dir.to_path_buf(), source })?;
    let mut report = serde_json::to_string_pretty(&art.report).expect("report values are finite or null");
    report.push('\n');
    let files = [
        (&names.trajectory, art.trajectory.as_deref()),
        (&names.report, Some(report.as_str())),
        (&names.sweep, art.sweep.as_deref()),
    ];
    let mut written = Vec::new();
    for (name, text) in files {
        let Some(text) = text else { continue };
        let path = dir.join(name);
        fs::write(&path, text).map_err(|source| RunError::Output { path: path.clone(), source })?;
        written.push(path);
    }
    Ok(written)
}
