//! JSON envelope, CSV tables and human-readable formatting.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "qift";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub spec: Option<String>,
    pub payload: T,
    pub wall_time_s: f64,
}

/// Rows for CSV output: a header and stringified records.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal, the same value serde_json writes.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Six significant digits.
pub fn sig(v: f64) -> String {
    qift_core::format_sig(v, 6)
}

pub fn write_json<T: Serialize>(w: impl Write, envelope: &Envelope<T>) -> Result<()> {
    let mut w = io::BufWriter::new(w);
    serde_json::to_writer_pretty(&mut w, envelope)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub enum OutFormat {
    Json,
    Csv,
}

pub fn out_format(path: &Path) -> OutFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => OutFormat::Csv,
        _ => OutFormat::Json,
    }
}

pub fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("cannot create {}", path.display()))
}
