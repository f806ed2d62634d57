//! File emission. Everything goes through [`write_atomic`], so a reader never sees a
//! half-written file and an interrupted run leaves the previous output in place.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use crate::units::format_number;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Numeric table rendered as CSV with shortest round-trip floats.
pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(row.iter().map(|&v| format_number(v)))?;
    }
    Ok(w.into_inner()?)
}

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    write_atomic(path, &csv_bytes(header, rows)?)
}

/// `key = value` lines, in insertion order.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, &format_number(value))
    }

    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        self.entries.push((key.to_owned(), value.to_owned()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.render().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/a.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
        // only the target remains, no stray temporaries
        assert_eq!(
            std::fs::read_dir(path.parent().unwrap()).unwrap().count(),
            1
        );
    }

    #[test]
    fn csv_layout() {
        let bytes = csv_bytes(&["a", "b"], vec![vec![1.0, 0.5], vec![-2e-7, 3.0]]).unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "a,b\n1e0,5e-1\n-2e-7,3e0\n"
        );
    }

    #[test]
    fn summary_lines() {
        let mut s = Summary::new();
        s.number("mu_J_per_T", 5.1e-24).text("status", "ok");
        assert_eq!(s.render(), "mu_J_per_T = 5.1e-24\nstatus = ok\n");
        assert_eq!(s.get("status"), Some("ok"));
    }
}
