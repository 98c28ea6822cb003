//! Rendering artifacts: `#`-commented config echo, CSV body, JSON sidecar.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::error::CliError;

/// The fully resolved configuration of one run, defaults filled in.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub parameters: BTreeMap<String, Value>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            parameters: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("parameters serialise to JSON");
        self.parameters.insert(key.to_string(), value);
    }

    /// SHA-256 of the canonical JSON form (keys sorted).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises to JSON");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Seventeen significant digits, locale-free.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// One output table plus everything echoed around it.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub config: RunConfig,
    /// Solved quantities (chemical potential, normalisation, windows…) echoed in the header.
    pub resolved: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Summary lines appended as trailing comments.
    pub summary: BTreeMap<String, Value>,
}

impl Artifact {
    pub fn new(config: RunConfig, columns: Vec<&'static str>) -> Self {
        Self {
            config,
            resolved: Vec::new(),
            columns,
            rows: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn resolved(&mut self, key: &str, value: impl ToString) {
        self.resolved.push((key.to_string(), value.to_string()));
    }

    pub fn resolved_float(&mut self, key: &str, value: f64) {
        self.resolved(key, format_float(value));
    }

    pub fn summarise(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("summary serialises to JSON");
        self.summary.insert(key.to_string(), value);
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# fermionflow {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# command = {}", self.config.command.name());
        let _ = writeln!(out, "# config_hash = {}", self.config.hash());
        for (k, v) in &self.config.parameters {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for (k, v) in &self.resolved {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# summary {k} = {v}");
        }
        out
    }

    pub fn sidecar(&self, output: &Path, wall_clock: f64) -> Value {
        serde_json::json!({
            "fermionflow_version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "config_hash": self.config.hash(),
            "resolved": self.resolved.iter().cloned().collect::<BTreeMap<_, _>>(),
            "summary": self.summary,
            "output": output.display().to_string(),
            "rows": self.rows.len(),
            "wall_clock_seconds": wall_clock,
        })
    }
}

/// `<out>.json`, next to the CSV.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".json");
    out.with_file_name(name)
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("cannot create a temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(contents)?;
    // tempfile creates 0600 files; artifacts should carry ordinary permissions.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("cannot move output into {}: {}", path.display(), e.error)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn hash_depends_on_parameters_only() {
        let mut a = RunConfig::new(Command::Fcs);
        a.set("t", 10.0);
        a.set("a", 1);
        let mut b = RunConfig::new(Command::Fcs);
        b.set("a", 1);
        b.set("t", 10.0);
        assert_eq!(a.hash(), b.hash());
        b.set("t", 11.0);
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn sidecar_sits_next_to_the_csv() {
        assert_eq!(sidecar_path(Path::new("out/run.csv")), PathBuf::from("out/run.csv.json"));
    }
}
