//! Run reports: a command echo, input digests, the seed, and an ordered list
//! of result fields, rendered either as `key: value` text or as one JSON
//! object. Identical command plus seed reproduces the payload bit for bit.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct InputDigest {
    pub name: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    fields: Vec<(String, Value)>,
}

impl RunReport {
    pub fn new(command: String, seed: Option<u64>) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            inputs: Vec::new(),
            fields: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, path: &std::path::Path) -> Result<(), CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputDigest {
            name: name.to_string(),
            path: path.display().to_string(),
            sha256: hex_string(&digest),
        });
        Ok(())
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("version: {}\n", self.version));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for input in &self.inputs {
            out.push_str(&format!("input.{}: {} sha256={}\n", input.name, input.path, input.sha256));
        }
        for (key, value) in &self.fields {
            match value {
                Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
                other => out.push_str(&format!("{key}: {other}\n")),
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut results = serde_json::Map::new();
        for (key, value) in &self.fields {
            results.insert(key.clone(), value.clone());
        }
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|i| json!({"name": i.name, "path": i.path, "sha256": i.sha256}))
            .collect();
        let doc = json!({
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "inputs": inputs,
            "results": results,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn render(&self, json_mode: bool) -> String {
        if json_mode {
            self.render_json()
        } else {
            self.render_text()
        }
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
