//! Parsers for the two text formats the CLI accepts from users.
//!
//! Both formats are line oriented, UTF-8, with `#` starting a comment that
//! runs to end of line. These functions are pure (`&str` in, data out) so
//! they can be driven directly by the fuzz targets; all failures are
//! reported as [`Error::Parse`] with a 1-based line number and never panic.

use crate::error::{Error, Result};
use crate::nodes::NodeFamily;
use std::collections::BTreeMap;

/// Parse a node file: one strictly increasing positive real per line.
///
/// Returns the raw values; use [`parse_node_family`] to get a validated
/// [`NodeFamily::Custom`]. Accepts anything Rust's float grammar accepts
/// (`1.5`, `2e-3`, …) but rejects NaN, infinities, non-positive values and
/// any non-increasing step, identifying the offending line.
pub fn parse_node_file(src: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut prev: Option<f64> = None;
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let v: f64 = text
            .parse()
            .map_err(|_| Error::Parse { line, reason: format!("not a real number: {text:?}") })?;
        if !v.is_finite() {
            return Err(Error::Parse { line, reason: format!("node must be finite, got {v}") });
        }
        if v <= 0.0 {
            return Err(Error::Parse { line, reason: format!("node must be positive, got {v}") });
        }
        if let Some(p) = prev {
            if v <= p {
                return Err(Error::Parse {
                    line,
                    reason: format!("nodes must be strictly increasing, {v} after {p}"),
                });
            }
        }
        prev = Some(v);
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptyNodes);
    }
    Ok(out)
}

/// Parse a node file directly into a custom node family.
pub fn parse_node_family(src: &str) -> Result<NodeFamily> {
    NodeFamily::custom(parse_node_file(src)?)
}

/// Parse a flat key–value config document.
///
/// One `key = value` pair per line (the `=` is mandatory, spaces around it
/// optional); keys are ASCII `[A-Za-z0-9_-]+`; values are kept as raw
/// strings for the caller to interpret. Later assignments to the same key
/// win. Blank lines and `#` comments are ignored.
pub fn parse_key_values(src: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let eq = text.find('=').ok_or_else(|| Error::Parse {
            line,
            reason: format!("expected `key = value`, got {text:?}"),
        })?;
        let key = text[..eq].trim();
        let value = text[eq + 1..].trim();
        if key.is_empty() {
            return Err(Error::Parse { line, reason: "empty key".into() });
        }
        if !key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-') {
            return Err(Error::Parse {
                line,
                reason: format!("key {key:?} may only contain [A-Za-z0-9_-]"),
            });
        }
        out.insert(key.to_string(), value.to_string());
    }
    Ok(out)
}
