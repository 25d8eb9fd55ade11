//! Rendering of command results as text, JSON or CSV.
//!
//! Every command yields a list of flat records. JSON carries full precision,
//! CSV rounds numbers to 12 significant digits and text to 6 decimal places.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Result of one command: the echoed parameters and flat records that each
/// repeat those parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub params: Map<String, Value>,
    pub records: Vec<Map<String, Value>>,
}

impl Output {
    /// Builds records by prefixing each with the parameters. Record fields
    /// override parameters of the same name.
    pub fn new(params: Map<String, Value>, rows: Vec<Map<String, Value>>) -> Self {
        let records = rows
            .into_iter()
            .map(|row| {
                let mut rec = params.clone();
                for (k, v) in row {
                    rec.insert(k, v);
                }
                rec
            })
            .collect();
        Self { params, records }
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for rec in &self.records {
            for k in rec.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({ "params": self.params, "results": self.records });
                serde_json::to_string_pretty(&doc).expect("finite values") + "\n"
            }
            Format::Csv => self.render_table(",", format_sig12, false),
            Format::Text => self.render_table("  ", format_fixed6, true),
        }
    }

    fn render_table(&self, sep: &str, number: fn(f64) -> String, pad: bool) -> String {
        let cols = self.columns();
        let mut rows: Vec<Vec<String>> = vec![cols.clone()];
        for rec in &self.records {
            rows.push(
                cols.iter()
                    .map(|c| rec.get(c).map(|v| cell(v, number)).unwrap_or_default())
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..cols.len())
            .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in rows {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if pad {
                        format!("{s:>w$}", w = widths[i])
                    } else {
                        s.clone()
                    }
                })
                .collect();
            out.push_str(&line.join(sep));
            out.push('\n');
        }
        out
    }
}

fn cell(v: &Value, number: fn(f64) -> String) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_i64() {
            Some(i) if n.is_i64() || n.is_u64() => i.to_string(),
            _ => n.as_f64().map(number).unwrap_or_default(),
        },
        Value::String(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        other => other.to_string(),
    }
}

/// Rounds to 12 significant digits and prints the shortest representation.
pub fn format_sig12(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("round trip");
    format!("{rounded}")
}

fn format_fixed6(v: f64) -> String {
    format!("{v:.6}")
}

/// Writes `content` to `path` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn emit(content: &str, path: Option<&Path>) -> Result<()> {
    match path {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
            lock.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| e.error)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Output {
        let mut params = Map::new();
        params.insert("p".into(), json!(1.0));
        let mut row = Map::new();
        row.insert("mean".into(), json!(19.0 / 3.0));
        row.insert("label".into(), json!("VII"));
        Output::new(params, vec![row])
    }

    #[test]
    fn csv_has_header_and_twelve_digits() {
        let csv = sample().render(Format::Csv);
        assert_eq!(csv, "p,mean,label\n1,6.33333333333,VII\n");
    }

    #[test]
    fn json_has_params_and_results() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["params"]["p"], json!(1.0));
        assert_eq!(v["results"][0]["mean"], json!(19.0 / 3.0));
        assert_eq!(v["results"][0]["p"], json!(1.0));
    }

    #[test]
    fn sig12_rounding() {
        assert_eq!(format_sig12(0.1 + 0.2), "0.3");
        assert_eq!(format_sig12(13.0 / 30.0), "0.433333333333");
        assert_eq!(format_sig12(-17.0 / 3.0), "-5.66666666667");
        assert_eq!(format_sig12(0.0), "0");
    }

    #[test]
    fn atomic_write_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit("a,b\n", Some(&path)).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n");
    }
}
