//! CSV tables with trailing metadata comments.

use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// First 16 hex digits of the SHA-256 of the canonical config text.
pub fn config_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone)]
pub struct Table {
    header: String,
    rows: Vec<String>,
    notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { header: columns.join(","), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.rows.push(fields.join(","));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn render(&self, command: &str, canonical: &str) -> String {
        let mut out = String::new();
        out.push_str(&self.header);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        let _ = writeln!(out, "# command={command}");
        for line in canonical.lines() {
            let _ = writeln!(out, "# config {line}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let _ = writeln!(out, "# hbie {VERSION} {}", config_hash(&format!("command={command}\n{canonical}")));
        out
    }

    pub fn write(&self, command: &str, canonical: &str, out: Option<&Path>) -> std::io::Result<()> {
        let text = self.render(command, canonical);
        match out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

/// Shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn sci(x: f64) -> String {
    format!("{x:.6e}")
}
