//! Flat `key = value` run configuration. File values first, flags on top.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Text,
    Real,
    Count,
}

pub const FAMILY_PARAMS: [&str; 15] =
    ["lambda", "mu", "mu1", "mu2", "mu3", "c", "c1", "c2", "c3", "omega", "r2", "r3", "nu", "tau", "delta"];
pub const MODEL_PARAMS: [&str; 8] = ["omega", "lambda", "mu", "c", "delta", "kappa", "m", "j"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    List,
    Verify,
    Spectrum,
    Ladder,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::List => "list",
            Command::Verify => "verify",
            Command::Spectrum => "spectrum",
            Command::Ladder => "ladder",
        }
    }

    fn keys(self) -> Vec<(&'static str, Kind)> {
        let mut keys = vec![("format", Kind::Text), ("output", Kind::Text)];
        let grid = [
            ("n_points", Kind::Count),
            ("xmin", Kind::Real),
            ("xmax", Kind::Real),
            ("eps", Kind::Real),
            ("length", Kind::Real),
            ("max_unknowns", Kind::Count),
            ("states", Kind::Text),
            ("tol", Kind::Real),
        ];
        let model = MODEL_PARAMS.iter().map(|k| (*k, Kind::Real));
        match self {
            Command::List => keys.push(("dim", Kind::Count)),
            Command::Verify => {
                keys.extend([("family", Kind::Text), ("model", Kind::Text), ("samples", Kind::Count), ("tol", Kind::Real)]);
                keys.extend(FAMILY_PARAMS.iter().chain(["kappa", "m", "j"].iter()).map(|k| (*k, Kind::Real)));
            }
            Command::Spectrum => {
                keys.extend([("model", Kind::Text), ("levels", Kind::Count)]);
                keys.extend(grid);
                keys.extend(model);
            }
            Command::Ladder => {
                keys.extend([("model", Kind::Text), ("n", Kind::Count)]);
                keys.extend(grid);
                keys.extend(model);
            }
        }
        keys
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parsed `key = value` lines; `#` starts a comment.
pub fn parse_flat(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {}: expected key = value, got '{raw}'", ln + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError(format!("config line {}: empty key", ln + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    values: BTreeMap<String, Value>,
}

impl RunConfig {
    /// Merges file entries with flag entries (flags win); unknown keys are rejected.
    pub fn build(command: Command, file: Option<&Path>, flags: Vec<(String, String)>) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
            entries.extend(parse_flat(&text)?);
        }
        entries.extend(flags);
        let keys = command.keys();
        let mut values = BTreeMap::new();
        for (k, v) in entries {
            let k = k.replace('-', "_");
            let kind = keys
                .iter()
                .find(|(name, _)| *name == k)
                .map(|(_, kind)| *kind)
                .ok_or_else(|| ConfigError(format!("unknown key '{k}' for command {}", command.name())))?;
            values.insert(k.clone(), typed(&k, &v, kind)?);
        }
        Ok(Self { command, values })
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).and_then(Value::as_str)
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        self.values.get(key).and_then(Value::as_f64)
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        self.values.get(key).and_then(Value::as_u64).map(|v| v as usize)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Records a resolved default so the report shows every value that was used.
    pub fn resolve(&mut self, key: &str, v: Value) {
        self.values.entry(key.to_string()).or_insert(v);
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.values.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), json!(self.command.name()));
        for (k, v) in &self.values {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

fn typed(key: &str, v: &str, kind: Kind) -> Result<Value, ConfigError> {
    let bad = |what: &str| ConfigError(format!("{key}: expected {what}, got '{v}'"));
    match kind {
        Kind::Text => Ok(json!(v)),
        Kind::Real => {
            let x: f64 = v.parse().map_err(|_| bad("a number"))?;
            if !x.is_finite() {
                return Err(bad("a finite number"));
            }
            Ok(json!(x))
        }
        Kind::Count => Ok(json!(v.parse::<u64>().map_err(|_| bad("a non-negative integer"))?)),
    }
}
