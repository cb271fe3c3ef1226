//! Deterministic table and JSON writers. Every file is written to a temporary
//! sibling and renamed into place.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A rectangular numeric table with named columns.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// 12 significant digits in scientific notation.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            columns: &'a [&'static str],
            rows: &'a [Vec<f64>],
        }
        let mut s = serde_json::to_string_pretty(&Doc {
            columns: &self.columns,
            rows: &self.rows,
        })
        .expect("tables serialize");
        s.push('\n');
        s
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes `table` as `<stem>.csv` or `<stem>.json`.
pub fn write_table(dir: &Path, stem: &str, table: &Table, format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => write_atomic(&dir.join(format!("{stem}.csv")), &table.to_csv()),
        Format::Json => write_atomic(&dir.join(format!("{stem}.json")), &table.to_json()),
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> std::io::Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("summaries serialize");
    s.push('\n');
    write_atomic(path, &s)
}
