//! Reproducibility header and report emission. Identical inputs produce
//! byte-identical JSON: struct field order is fixed, maps are ordered, and
//! no timestamps or machine identifiers enter the output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use fmk_core::{Error, Result};

#[derive(Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// sha256 of every input file consumed by the run, keyed by path.
    pub inputs: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct Document<T: Serialize> {
    pub meta: Meta,
    pub report: T,
}

pub fn meta(command: &str, input_paths: &[&Path]) -> Result<Meta> {
    let mut inputs = BTreeMap::new();
    for path in input_paths {
        let bytes = std::fs::read(path).map_err(|e| Error::LoadError {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        inputs.insert(
            path.display().to_string(),
            format!("sha256:{:x}", hasher.finalize()),
        );
    }
    Ok(Meta {
        tool: "fmk",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        inputs,
    })
}

/// Hash already-loaded bytes (for embedded fixtures).
pub fn meta_with_embedded(command: &str, embedded: &[(&str, &str)]) -> Meta {
    let mut inputs = BTreeMap::new();
    for (name, text) in embedded {
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        inputs.insert(name.to_string(), format!("sha256:{:x}", hasher.finalize()));
    }
    Meta {
        tool: "fmk",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        inputs,
    }
}

pub fn emit<T: Serialize>(doc: &Document<T>, out: Option<&Path>) -> Result<()> {
    let json =
        serde_json::to_string_pretty(doc).map_err(|e| Error::Internal(e.to_string()))?;
    match out {
        None => {
            println!("{json}");
            Ok(())
        }
        Some(path) => std::fs::write(path, json.as_bytes()).map_err(|e| Error::WriteError {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
    }
}
