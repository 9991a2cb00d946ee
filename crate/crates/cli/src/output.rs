//! Deterministic artifact writers: RFC-4180 CSV, JSON summaries, minimal
//! self-contained SVG. No timestamps, no locale, no float shortcuts — the
//! same config must produce the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use uniq_core::exponents::Limit;

/// 17 significant digits, scientific notation; infinities spelled out.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn fmt_limit(l: Limit) -> String {
    match l.finite() {
        Some(v) => fmt_float(v),
        None => "inf".into(),
    }
}

/// JSON value for a float; non-finite values become strings since JSON has
/// no literal for them.
pub fn json_float(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(fmt_float(v))
    }
}

pub fn json_limit(l: Limit) -> Value {
    match l.finite() {
        Some(v) => json_float(v),
        None => Value::String("inf".into()),
    }
}

/// CSV with a mandatory header, CRLF records, fixed column count. Fields
/// never need quoting here (no commas, quotes or newlines are ever emitted).
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push_str("\r\n");
        Csv { buf, columns: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "CSV row width");
        self.buf.push_str(&fields.join(","));
        self.buf.push_str("\r\n");
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// One named pass/fail check with the measured evidence.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Assertion { name, pass, detail: detail.into() }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

/// Assemble the summary document. `serde_json`'s map is ordered (BTree), so
/// serialization is deterministic.
pub fn summary(command: &str, config: Value, derived: Value, assertions: &[Assertion]) -> Value {
    let all = assertions.iter().all(|a| a.pass);
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "derived": derived,
        "assertions": assertions
            .iter()
            .map(|a| json!({"name": a.name, "pass": a.pass, "detail": a.detail}))
            .collect::<Vec<_>>(),
        "all_passed": all,
    })
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text)
        .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable summary");
    text.push('\n');
    write_text(dir, name, &text)
}

/// Membership heatmap: filled cells for in-set grid points, row runs merged
/// into single rectangles. `cells[i][j]` is column i (x, left to right),
/// row j (y, bottom to top).
pub fn membership_svg(cells: &[Vec<bool>], title: &str) -> String {
    let g = cells.len();
    let mut s = svg_open(g, title);
    for j in 0..g {
        let y = g - 1 - j;
        let mut i = 0;
        while i < g {
            if cells[i][j] {
                let start = i;
                while i < g && cells[i][j] {
                    i += 1;
                }
                let _ = writeln!(
                    s,
                    r##"<rect x="{start}" y="{y}" width="{}" height="1" fill="#3b64d8"/>"##,
                    i - start
                );
            } else {
                i += 1;
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Grayscale-to-blue heatmap of `values[i][j] ∈ [0, 1]` (column i = x,
/// row j = y bottom-up) with a boundary polyline overlaid.
pub fn heatmap_svg(values: &[Vec<f64>], boundary: &[Vec<bool>], title: &str) -> String {
    let g = values.len();
    let mut s = svg_open(g, title);
    let peak = values
        .iter()
        .flat_map(|c| c.iter().copied())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    for (i, col) in values.iter().enumerate() {
        for (j, &v) in col.iter().enumerate() {
            let t = (v / peak).clamp(0.0, 1.0);
            let r = (255.0 - 224.0 * t).round() as u8;
            let gr = (255.0 - 176.0 * t).round() as u8;
            let b = (255.0 - 39.0 * t).round() as u8;
            let _ = writeln!(
                s,
                r##"<rect x="{i}" y="{}" width="1" height="1" fill="rgb({r},{gr},{b})"/>"##,
                g - 1 - j
            );
        }
    }
    // Step line along the top edge of the outermost in-region cell per column.
    let mut points = String::new();
    for (i, col) in boundary.iter().enumerate() {
        let top = col.iter().rposition(|&m| m);
        let y = match top {
            Some(j) => g - 1 - j,
            None => g,
        };
        let _ = write!(points, "{i},{y} {},{y} ", i + 1);
    }
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#c41e3a" stroke-width="0.2"/>"##,
        points.trim_end()
    );
    s.push_str("</svg>\n");
    s
}

fn svg_open(g: usize, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {g} {g}" width="512" height="512" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{g}" height="{g}" fill="#ffffff"/>"##);
    s
}
