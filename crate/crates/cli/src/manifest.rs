//! Run manifests written next to every output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cosmic_vacuum::{Error, Result};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("COSMIC_VACUUM_VERSION");

/// `params` holds every resolved flag of the command as `--name value`
/// pairs, so feeding them back through the parser repeats the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, params: BTreeMap<String, String>, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            params,
            outputs: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
        }
    }

    /// Writes `<command>.manifest.json` into `dir` and returns its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.manifest.json", self.command));
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    /// Command-line arguments that repeat the run.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.command.clone()];
        for (k, v) in &self.params {
            args.push(format!("--{k}"));
            args.push(v.clone());
        }
        args
    }
}

pub fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn args_follow_params() {
        let mut p = BTreeMap::new();
        p.insert("kappa".to_string(), "0.0128".to_string());
        let m = RunManifest::new("tension", p, None);
        assert_eq!(m.to_args(), vec!["tension", "--kappa", "0.0128"]);
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest::new("noise", BTreeMap::new(), Some(7));
        m.outputs.push(dir.path().join("noise.csv"));
        let path = m.write(dir.path()).unwrap();
        assert_eq!(RunManifest::read(&path).unwrap(), m);
    }
}
