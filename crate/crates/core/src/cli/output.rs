//! Deterministic CSV output with a `.meta.json` sidecar, written atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::CliError;

/// Seventeen significant digits, round-trip exact.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // normalise -0
        return "0.0000000000000000e0".into();
    }
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// An in-memory table flushed in one piece.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

#[derive(Debug, Serialize)]
struct Meta<'a, C: Serialize> {
    file: &'a str,
    command: &'a str,
    version: &'a str,
    columns: &'a [String],
    rows: usize,
    config: &'a C,
}

/// Writes `name` and `name.meta.json` under `dir`; returns the CSV path.
pub fn write_table<C: Serialize>(
    dir: &Path,
    name: &str,
    command: &str,
    table: &Table,
    config: &C,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    write_atomic(&path, &table.to_bytes()?)?;
    let meta = Meta {
        file: name,
        command,
        version: env!("CARGO_PKG_VERSION"),
        columns: &table.header,
        rows: table.rows.len(),
        config,
    };
    let mut json = serde_json::to_vec_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    json.push(b'\n');
    write_atomic(&dir.join(format!("{name}.meta.json")), &json)?;
    Ok(path)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Reads a CSV written by [`write_table`] back into header and rows.
pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let header = r.headers()?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(String::from).collect()))
        .collect::<Result<Vec<Vec<String>>, _>>()?;
    Ok(Table { header, rows })
}

/// File-name fragment for a number: `0.2` -> `0.2`, `-4` -> `-4`.
pub fn tag(v: f64) -> String {
    format!("{v}")
}
