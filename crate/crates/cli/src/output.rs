//! Output rendering: canonical JSON, CSV tables, and plain text.
//!
//! Canonical form: keys sorted (serde_json's default map is ordered),
//! floats rounded to 9 significant digits before serialization so that
//! parse -> serialize round-trips byte-identically, non-finite floats
//! as null, big integers as decimal strings at the call sites.

use serde_json::Value;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

/// Rounds to 9 significant digits. Zero and non-finite values pass through.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.8e}", x).parse().expect("sig9 reparse")
}

/// Decimal text of a float at canonical precision.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", sig9(x))
}

fn canonicalize(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = sig9(n.as_f64().expect("f64 number"));
                *v = match serde_json::Number::from_f64(x) {
                    Some(num) => Value::Number(num),
                    None => Value::Null,
                };
            }
        }
        Value::Array(items) => {
            for item in items {
                canonicalize(item);
            }
        }
        Value::Object(map) => {
            for (_, item) in map.iter_mut() {
                canonicalize(item);
            }
        }
        _ => {}
    }
}

/// Serializes to the canonical single-line JSON form, newline-terminated.
pub fn render_json(mut v: Value) -> String {
    canonicalize(&mut v);
    let mut s = serde_json::to_string(&v).expect("json serialize");
    s.push('\n');
    s
}

/// RFC 4180 field quoting: quote when a comma, quote, or line break appears.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders header + rows with LF line endings.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

/// Plain-text report: one `key: value` line per entry.
pub fn render_text(lines: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in lines {
        out.push_str(k);
        out.push_str(": ");
        out.push_str(v);
        out.push('\n');
    }
    out
}

/// Writes to `--out PATH` when given, stdout otherwise.
pub fn emit(body: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}
