#![allow(dead_code)]

use std::path::PathBuf;

use liesym_cli::{AnalyzeConfig, OutputFormat};

/// Path of a file under `examples_ode`.
pub fn example(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "examples_ode", name].iter().collect()
}

/// Path of a file under `tests/golden`.
pub fn golden(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect()
}

pub fn analyze_config(name: &str, deg_x: u32, deg_t: u32, format: OutputFormat) -> AnalyzeConfig {
    AnalyzeConfig {
        ode_path: example(name),
        deg_x,
        deg_t,
        bindings: Vec::new(),
        format,
        reference: None,
        out: None,
    }
}

fn depth_change(token: &str) -> i64 {
    let count = |pat: &str| token.matches(pat).count() as i64;
    count("{") - count("}") + count("\\left") - count("\\right")
}

/// Terms of a LaTeX sum as sign plus sorted factor tokens, the whole list sorted.
pub fn latex_terms(expr: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut sign = '+';
    let mut factors: Vec<String> = Vec::new();
    let mut depth = 0i64;
    let flush = |sign: char, factors: &mut Vec<String>, terms: &mut Vec<String>| {
        if !factors.is_empty() {
            factors.sort();
            terms.push(format!("{sign}{}", factors.join(" ")));
            factors.clear();
        }
    };
    for token in expr.split_whitespace() {
        if depth == 0 && (token == "+" || token == "-") {
            flush(sign, &mut factors, &mut terms);
            sign = if token == "-" { '-' } else { '+' };
            continue;
        }
        let token = if depth == 0 && factors.is_empty() && token.len() > 1 {
            match token.strip_prefix('-') {
                Some(rest) => {
                    sign = if sign == '-' { '+' } else { '-' };
                    rest
                }
                None => token,
            }
        } else {
            token
        };
        depth += depth_change(token);
        factors.push(token.to_string());
    }
    flush(sign, &mut factors, &mut terms);
    terms.sort();
    terms
}

/// `(label, expression)` for every `label &: \quad expr = 0` line of the
/// LaTeX section with the given title.
pub fn latex_section_equations(doc: &str, title: &str) -> Vec<(String, String)> {
    let header = format!("\\subsection*{{{title}}}");
    let start = doc.find(&header).expect("section present") + header.len();
    let body = &doc[start..];
    let body = &body[..body.find("\\subsection*").unwrap_or(body.len())];
    body.lines()
        .filter_map(|l| {
            let l = l.trim_end().trim_end_matches("\\\\").trim_end();
            let (label, rest) = l.split_once(" &: \\quad ")?;
            Some((label.to_string(), rest.strip_suffix(" = 0")?.to_string()))
        })
        .collect()
}

/// `key = value` pairs of a golden file shared with the core crate's tests.
pub fn core_golden(name: &str) -> std::collections::BTreeMap<String, String> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "golden", name]
        .iter()
        .collect();
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
