use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use qboundary::Mode;
use serde::Serialize;
use serde_json::Value;

/// A problem with the command line or config file; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

/// Settings read from `--config`: a JSON object or `key = value` lines (`#` starts a
/// comment). Keys are the long flag names; `-` and `_` are interchangeable.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    entries: BTreeMap<String, String>,
}

fn normalise_key(key: &str) -> String {
    let key = key.trim().replace('-', "_");
    if key == "k" {
        "K".to_string()
    } else {
        key
    }
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut entries = BTreeMap::new();
        if text.trim_start().starts_with('{') {
            let doc: BTreeMap<String, Value> = serde_json::from_str(text)
                .map_err(|e| usage(format!("config is not a JSON object: {e}")))?;
            for (key, value) in doc {
                let value = match value {
                    Value::Null => continue,
                    Value::String(s) => s,
                    Value::Number(_) | Value::Bool(_) => value.to_string(),
                    other => return Err(usage(format!("config key {key}: unsupported value {other}"))),
                };
                entries.insert(normalise_key(&key), value);
            }
        } else {
            for (lineno, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
                entries.insert(normalise_key(key), value.trim().trim_matches('"').to_string());
            }
        }
        Ok(Self { entries })
    }

    /// Rejects keys the subcommand does not understand.
    pub fn check_keys(&self, allowed: &[&str]) -> anyhow::Result<()> {
        for key in self.entries.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(usage(format!("unknown config key {key:?}")));
            }
        }
        Ok(())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> anyhow::Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.entries
            .get(key)
            .map(|raw| {
                raw.parse::<T>()
                    .map_err(|e| usage(format!("config key {key}: {e}")))
            })
            .transpose()
    }
}

/// Flag value, else config value, else `default`.
pub fn pick<T: FromStr>(flag: Option<T>, file: &FileConfig, key: &str, default: T) -> anyhow::Result<T>
where
    T::Err: fmt::Display,
{
    Ok(match flag {
        Some(v) => v,
        None => file.get(key)?.unwrap_or(default),
    })
}

/// Like [`pick`] but with no default.
pub fn require<T: FromStr>(flag: Option<T>, file: &FileConfig, key: &str) -> anyhow::Result<T>
where
    T::Err: fmt::Display,
{
    match flag {
        Some(v) => Ok(v),
        None => file
            .get(key)?
            .ok_or_else(|| usage(format!("missing required option --{key}"))),
    }
}

/// `p/r` and integers are exact, anything with a decimal point or exponent is float.
pub fn infer_mode(q: &str) -> Mode {
    if q.contains(['.', 'e', 'E']) {
        Mode::Float
    } else {
        Mode::Exact
    }
}

/// Settings shared by every subcommand, as embedded in output files. The output
/// directory is deliberately left out so reruns elsewhere produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Common {
    pub subcommand: &'static str,
    pub q: String,
    pub mode: Mode,
    pub format: Format,
    pub seed: u64,
}

// `subcommand` is accepted (and ignored) so an embedded config can be fed back in.
pub const COMMON_KEYS: [&str; 7] = ["q", "mode", "format", "out", "seed", "config", "subcommand"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_and_json_agree() {
        let kv = FileConfig::parse("# run\nq = 1/2\nK=300\nasymptotics = true\n").unwrap();
        let js = FileConfig::parse(r#"{"q": "1/2", "k": 300, "asymptotics": true}"#).unwrap();
        assert_eq!(kv.entries, js.entries);
        assert_eq!(kv.get::<usize>("K").unwrap(), Some(300));
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse("seed = 3").unwrap();
        assert_eq!(pick(Some(9u64), &file, "seed", 0).unwrap(), 9);
        assert_eq!(pick(None, &file, "seed", 0u64).unwrap(), 3);
        assert_eq!(pick(None, &FileConfig::default(), "seed", 5u64).unwrap(), 5);
        assert!(require::<usize>(None, &file, "n").is_err());
    }

    #[test]
    fn bad_entries() {
        assert!(FileConfig::parse("no equals sign").is_err());
        assert!(FileConfig::parse(r#"{"q": [1]}"#).is_err());
        let file = FileConfig::parse("seed = x").unwrap();
        assert!(file.get::<u64>("seed").is_err());
        assert!(file.check_keys(&["q"]).is_err());
    }

    #[test]
    fn mode_inference() {
        assert_eq!(infer_mode("1/2"), Mode::Exact);
        assert_eq!(infer_mode("0.5"), Mode::Float);
        assert_eq!(infer_mode("5e-1"), Mode::Float);
    }
}
