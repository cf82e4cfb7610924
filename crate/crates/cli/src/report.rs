//! Aggregation of artifacts into one CSV and one markdown table.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use crate::artifact::{opt, Artifact, SummaryRow, SCHEMA_VERSION};
use pwlab_core::io::read_to_string;

pub const HEADER: [&str; 6] = ["fixture", "C", "C_tilde", "ratio", "slack", "pass"];

pub fn load(paths: &[PathBuf]) -> Result<Vec<Artifact>> {
    let mut out = Vec::with_capacity(paths.len());
    let mut version = None;
    for path in paths {
        let text = read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)
            .map_err(pwlab_core::io::IoError::from)
            .with_context(|| path.display().to_string())?;
        let v = value
            .get("schema_version")
            .and_then(Value::as_u64)
            .with_context(|| format!("{}: no schema_version", path.display()))?;
        match version {
            None => version = Some(v),
            Some(w) if w != v => bail!("mixed schema versions: {w} and {v} ({})", path.display()),
            _ => {}
        }
        if v != u64::from(SCHEMA_VERSION) {
            bail!("{}: schema version {v} is not supported (expected {SCHEMA_VERSION})", path.display());
        }
        out.push(serde_json::from_value(value).with_context(|| path.display().to_string())?);
    }
    Ok(out)
}

pub fn rows(artifacts: &[Artifact]) -> Vec<SummaryRow> {
    artifacts.iter().flat_map(|a| a.summary.iter().cloned()).collect()
}

pub fn csv_rows(rows: &[SummaryRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.fixture.clone(),
                opt(r.c),
                opt(r.c_tilde),
                opt(r.ratio),
                opt(r.slack),
                r.pass.to_string(),
            ]
        })
        .collect()
}

pub fn markdown(rows: &[SummaryRow], stamp: &str) -> String {
    let cell = |v: Option<f64>| v.map(|x| format!("{x:.4e}")).unwrap_or_else(|| "–".into());
    let mut s = format!("<!-- {} -->\n", stamp.trim_start_matches("# "));
    s.push_str(&format!("| {} |\n", HEADER.join(" | ")));
    s.push_str(&format!("|{}\n", "---|".repeat(HEADER.len())));
    for r in rows {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            r.fixture,
            cell(r.c),
            cell(r.c_tilde),
            cell(r.ratio),
            cell(r.slack),
            if r.pass { "pass" } else { "FAIL" }
        ));
    }
    s
}
