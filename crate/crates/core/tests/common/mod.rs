#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;
use std::path::PathBuf;

/// `key = value` pairs of a file under `tests/golden`, skipping `#` comments.
pub fn golden(name: &str) -> BTreeMap<String, String> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (k, v) = l.split_once('=').expect("key = value");
            (k.trim().to_string(), v.trim().to_string())
        })
        .collect()
}

/// Parameter names listed under `params`.
pub fn golden_params(entries: &BTreeMap<String, String>) -> Vec<String> {
    entries
        .get("params")
        .map(|p| p.split(',').map(|s| s.trim().to_string()).collect())
        .unwrap_or_default()
}
