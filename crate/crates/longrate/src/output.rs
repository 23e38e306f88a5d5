//! CSV rendering with `#` comment headers.
//!
//! Every file starts with
//!
//! ```text
//! # longrate <command>
//! # config_sha256=<hex>
//! # seed=<u64 or none>
//! # generated_unix=<seconds>
//! ```
//!
//! followed by any `# key=value` notes, the column header and the rows.
//! Floats are written in shortest round-trip form, so parsing a cell gives
//! back the exact `f64` that was computed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::RunError;

/// Shortest decimal string that parses back to `x`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    /// Index of `name` in the header.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meta {
    pub command: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
}

pub fn render(table: &Table, meta: &Meta) -> Result<Vec<u8>, RunError> {
    let generated = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut out = Vec::new();
    writeln!(out, "# longrate {}", meta.command)?;
    writeln!(out, "# config_sha256={}", meta.config_sha256)?;
    match meta.seed {
        Some(s) => writeln!(out, "# seed={s}")?,
        None => writeln!(out, "# seed=none")?,
    }
    writeln!(out, "# generated_unix={generated}")?;
    for (k, v) in &table.notes {
        writeln!(out, "# {k}={v}")?;
    }
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

fn csv_err(e: csv::Error) -> RunError {
    RunError::Io(std::io::Error::other(e))
}

/// The CSV with the `generated_unix` line removed.
pub fn body(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| !l.starts_with("# generated_unix="))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Where a command writes: `--out`, then the config's `output.path`, then
/// `$LONGRATE_OUT_DIR/<command>.csv`, else stdout (`None`).
pub fn destination(out: Option<&Path>, config_path: Option<&Path>, env_dir: Option<&Path>, command: &str) -> Option<PathBuf> {
    out.or(config_path)
        .map(Path::to_path_buf)
        .or_else(|| env_dir.map(|d| d.join(format!("{command}.csv"))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_numbers() {
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(0.05), "0.05");
        assert_eq!(num(1e-12), "1e-12");
        for x in [0.1 + 0.2, std::f64::consts::PI, -2.5e-300, 0.051271096376024].iter() {
            assert_eq!(num(*x).parse::<f64>().unwrap(), *x);
        }
    }

    #[test]
    fn header_then_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.note("n_star", 542);
        t.push(vec![num(1.0), "x,y".into()]);
        let meta = Meta { command: "demo".into(), config_sha256: "ab".into(), seed: Some(7) };
        let text = String::from_utf8(render(&t, &meta).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# longrate demo");
        assert_eq!(lines[1], "# config_sha256=ab");
        assert_eq!(lines[2], "# seed=7");
        assert!(lines[3].starts_with("# generated_unix="));
        assert_eq!(&lines[4..], ["# n_star=542", "a,b", "1.0,\"x,y\""]);
        assert!(!body(text.as_bytes()).contains("generated_unix"));
    }

    #[test]
    fn destination_precedence() {
        let out = Path::new("a.csv");
        let cfg = Path::new("b.csv");
        let dir = Path::new("/tmp/o");
        assert_eq!(destination(Some(out), Some(cfg), Some(dir), "x"), Some(out.to_path_buf()));
        assert_eq!(destination(None, Some(cfg), Some(dir), "x"), Some(cfg.to_path_buf()));
        assert_eq!(destination(None, None, Some(dir), "rates"), Some(dir.join("rates.csv")));
        assert_eq!(destination(None, None, None, "x"), None);
    }
}
