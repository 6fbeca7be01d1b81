use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{CliError, Output};

/// Describes one run well enough to repeat it. It has no timestamps, so equal
/// runs produce byte-identical manifests.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub args: serde_json::Value,
    pub seed: u64,
    pub version: &'static str,
    pub outputs: Vec<PathBuf>,
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `content` to `--out` (with its manifest) or to stdout.
pub fn emit<A: Serialize>(
    output: &Output,
    subcommand: &str,
    args: &A,
    seed: u64,
    content: &str,
) -> Result<(), CliError> {
    let Some(out) = &output.out else {
        print!("{content}");
        return Ok(());
    };
    let manifest = RunManifest {
        subcommand: subcommand.to_string(),
        args: serde_json::to_value(args).map_err(|e| CliError::Runtime(e.to_string()))?,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        outputs: vec![out.clone()],
    };
    let text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
    fs::write(out, content)?;
    fs::write(manifest_path(out), text + "\n")?;
    Ok(())
}
