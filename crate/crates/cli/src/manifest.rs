use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// What produced an output file. Written beside the file rather than into it,
/// so the data file itself stays byte-identical across reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_snapshot: serde_json::Value,
    /// `None` for commands that draw no random numbers.
    pub seed: Option<u64>,
    /// ISO-8601, UTC.
    pub timestamp: String,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, config: &impl Serialize, seed: Option<u64>) -> Self {
        Self {
            command: command.to_owned(),
            config_snapshot: serde_json::to_value(config).expect("configs serialize"),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    /// `<out>.manifest.json`
    pub fn sidecar_path(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write_beside(&self, out: &Path) -> CliResult<()> {
        let path = Self::sidecar_path(out);
        let json = crate::format::to_json(self)?;
        std::fs::write(&path, json).map_err(|e| CliError::io(&path, e))
    }

    /// Same run, ignoring when it happened.
    pub fn same_run(&self, other: &RunManifest) -> bool {
        self.command == other.command
            && self.config_snapshot == other.config_snapshot
            && self.seed == other.seed
            && self.tool_version == other.tool_version
    }
}
