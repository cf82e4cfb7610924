//! Output envelope shared by every subcommand: tool version, config hash and
//! seed, plus a flat summary that `report` aggregates.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One row of the aggregated table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub fixture: String,
    pub c: Option<f64>,
    pub c_tilde: Option<f64>,
    pub ratio: Option<f64>,
    pub slack: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Artifact {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub config: Value,
    pub pass: bool,
    pub summary: Vec<SummaryRow>,
    pub result: Value,
}

/// SHA-256 of the compact JSON form; object keys are sorted, so the hash
/// does not depend on input formatting.
pub fn config_hash(config: &Value) -> String {
    let digest = Sha256::digest(serde_json::to_vec(config).expect("JSON values serialize"));
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Artifact {
    pub fn new(command: &str, seed: u64, config: Value, result: Value, summary: Vec<SummaryRow>, pass: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "pwlab".into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            config_hash: config_hash(&config),
            seed,
            config,
            pass,
            summary,
            result,
        }
    }

    /// `# pwlab <version> config=<hash> seed=<seed>`
    pub fn stamp(&self) -> String {
        format!("# {} {} config={} seed={}", self.tool, self.tool_version, self.config_hash, self.seed)
    }
}

/// Path next to `out` with another extension.
pub fn sibling(out: &Path, ext: &str) -> PathBuf {
    out.with_extension(ext)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// CSV with the artifact stamp as a leading comment line.
pub fn write_csv(path: &Path, stamp: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner()?)?;
    write_text(path, &format!("{stamp}\n{body}"))
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
