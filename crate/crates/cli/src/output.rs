use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use qboundary::export::Table;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;

pub const TOOL_VERSION: &str = concat!("qboundary ", env!("CARGO_PKG_VERSION"));

pub enum Artifact {
    Table(Table),
    Json { name: String, value: Value },
}

impl Artifact {
    pub fn json(name: &str, value: Value) -> Self {
        Artifact::Json {
            name: name.to_string(),
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    /// `None` when the check was not applicable to this configuration.
    pub passed: Option<bool>,
    pub detail: Value,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: Value) -> Self {
        Self {
            check: name.to_string(),
            passed: Some(passed),
            detail,
        }
    }

    pub fn skipped(name: &str, reason: &str) -> Self {
        Self {
            check: name.to_string(),
            passed: None,
            detail: json!({ "skipped": reason }),
        }
    }

    pub fn failed(&self) -> bool {
        self.passed == Some(false)
    }
}

#[derive(Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn table(&mut self, table: Table) {
        self.artifacts.push(Artifact::Table(table));
    }

    pub fn json(&mut self, name: &str, value: Value) {
        self.artifacts.push(Artifact::json(name, value));
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: Value) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn all_passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every artifact plus `manifest.json` into `dir` and returns the file paths.
pub fn write_outcome(dir: &Path, config: &Value, format: Format, outcome: &Outcome) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut files = Vec::new();
    for artifact in &outcome.artifacts {
        let (name, bytes) = render(artifact, config, format)?;
        let path = dir.join(&name);
        fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        files.push(json!({ "file": name, "sha256": sha256_hex(&bytes) }));
        written.push(path);
    }
    let body = json!({
        "tool_version": TOOL_VERSION,
        "config": config,
        "results": outcome.checks,
        "files": files,
    });
    let path = dir.join("manifest.json");
    fs::write(&path, with_hash(body)?).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    Ok(written)
}

// Adds `"hash"`: the digest of the compact serialisation of the other keys.
fn with_hash(mut doc: Value) -> anyhow::Result<Vec<u8>> {
    let hash = sha256_hex(serde_json::to_string(&doc)?.as_bytes());
    doc["hash"] = Value::String(hash);
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn render(artifact: &Artifact, config: &Value, format: Format) -> anyhow::Result<(String, Vec<u8>)> {
    match (artifact, format) {
        (Artifact::Table(table), Format::Csv) => {
            let comments = vec![
                format!("tool_version {TOOL_VERSION}"),
                format!("config {}", serde_json::to_string(config)?),
            ];
            let body = table.to_csv_string(&comments)?;
            let text = format!("# sha256 {}\n{body}", sha256_hex(body.as_bytes()));
            Ok((format!("{}.csv", table.name), text.into_bytes()))
        }
        (Artifact::Table(table), Format::Json) => {
            let doc = json!({
                "tool_version": TOOL_VERSION,
                "config": config,
                "table": table.to_json(),
            });
            Ok((format!("{}.json", table.name), with_hash(doc)?))
        }
        (Artifact::Json { name, value }, _) => {
            let doc = json!({
                "tool_version": TOOL_VERSION,
                "config": config,
                "data": value,
            });
            Ok((format!("{name}.json"), with_hash(doc)?))
        }
    }
}

/// Recomputes the hash of a written file; `true` when it matches the embedded one.
pub fn verify_file(bytes: &[u8]) -> anyhow::Result<bool> {
    let text = std::str::from_utf8(bytes)?;
    if let Some(rest) = text.strip_prefix("# sha256 ") {
        let (hash, body) = rest.split_once('\n').context("truncated csv header")?;
        return Ok(sha256_hex(body.as_bytes()) == hash);
    }
    let mut doc: Value = serde_json::from_str(text)?;
    let hash = doc
        .as_object_mut()
        .and_then(|m| m.remove("hash"))
        .context("no hash field")?;
    Ok(Value::String(sha256_hex(serde_json::to_string(&doc)?.as_bytes())) == hash)
}
