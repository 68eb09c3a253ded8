//! Run manifests: one JSON record per command invocation that emits files,
//! listing what was written and with which parameters.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub artifacts: Vec<String>,
    pub wall_time_seconds: f64,
    pub version: String,
    #[serde(skip)]
    started: Instant,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            artifacts: Vec::new(),
            wall_time_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn artifact(&mut self, path: &Path) {
        self.artifacts.push(path.display().to_string());
    }

    /// Write the manifest next to the primary artifact as
    /// `<primary>.manifest.json` and return its path.
    pub fn write_alongside(mut self, primary: &Path) -> std::io::Result<PathBuf> {
        let path = PathBuf::from(format!("{}.manifest.json", primary.display()));
        self.wall_time_seconds = self.started.elapsed().as_secs_f64();
        self.artifacts.push(path.display().to_string());
        let body = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(&path, body + "\n")?;
        Ok(path)
    }
}
