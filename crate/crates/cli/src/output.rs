//! Output files are assembled in memory and written in one pass at the end.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Default)]
pub struct Bundle {
    files: BTreeMap<PathBuf, Vec<u8>>,
}

impl Bundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, rel: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.insert(rel.into(), bytes);
    }

    pub fn add_text(&mut self, rel: impl Into<PathBuf>, text: impl Into<String>) {
        self.add(rel, text.into().into_bytes());
    }

    pub fn add_json<T: Serialize + ?Sized>(&mut self, rel: impl Into<PathBuf>, value: &T) -> anyhow::Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(rel, bytes);
        Ok(())
    }

    pub fn add_csv(&mut self, rel: impl Into<PathBuf>, table: Table) -> anyhow::Result<()> {
        self.add(rel, table.into_bytes()?);
        Ok(())
    }

    pub fn extend(&mut self, other: Bundle) {
        self.files.extend(other.files);
    }

    /// Writes every file under `dir`. If any write fails, the files and
    /// directories created by this call are removed again.
    pub fn commit(self, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
        let mut created_dirs = Vec::new();
        let mut written = Vec::new();
        let result = (|| -> anyhow::Result<()> {
            for (rel, bytes) in &self.files {
                let path = dir.join(rel);
                if let Some(parent) = path.parent() {
                    let mut missing = Vec::new();
                    let mut p = parent;
                    while !p.as_os_str().is_empty() && !p.exists() {
                        missing.push(p.to_path_buf());
                        match p.parent() {
                            Some(q) => p = q,
                            None => break,
                        }
                    }
                    fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
                    created_dirs.extend(missing);
                }
                fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
                written.push(path);
            }
            Ok(())
        })();
        if let Err(e) = result {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            // deepest first
            created_dirs.sort_by_key(|d| std::cmp::Reverse(d.components().count()));
            for d in &created_dirs {
                let _ = fs::remove_dir(d);
            }
            return Err(e);
        }
        Ok(written)
    }
}

/// Fixed-point text for a probability or statistic.
pub fn fmt6(x: f64) -> String {
    if x.is_finite() {
        let s = format!("{x:.6}");
        if s == "-0.000000" {
            "0.000000".into()
        } else {
            s
        }
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt6).unwrap_or_default()
}

/// A CSV table built row by row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<I, S>(header: I) -> anyhow::Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> anyhow::Result<Vec<u8>> {
        self.writer.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))
    }
}
