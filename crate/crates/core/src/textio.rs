//! Shared pieces of the plain-text artifact formats: `# key=value` header
//! lines followed by comma-separated rows.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Ordered `key=value` metadata written as `# key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: &str, version: u32) -> Self {
        let mut h = Self::default();
        h.set("format", kind);
        h.set("schema_version", version);
        h
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(out, "# {k}={v}")?;
        }
        Ok(())
    }
}

/// A parsed text artifact: header, column names and raw data lines with
/// their 1-based line numbers.
pub struct TextTable {
    pub path: PathBuf,
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<(usize, String)>,
}

impl TextTable {
    pub fn read(path: &Path) -> Result<Self> {
        let reader = BufReader::new(std::fs::File::open(path)?);
        let mut header = Header::default();
        let mut columns = None;
        let mut rows = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            if let Some(meta) = line.strip_prefix('#') {
                let (k, v) = meta
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| Error::parse(path, lineno, "header line is not key=value"))?;
                header.set(k.trim(), v.trim());
            } else if line.trim().is_empty() {
                continue;
            } else if columns.is_none() {
                columns = Some(line.split(',').map(|c| c.trim().to_string()).collect());
            } else {
                rows.push((lineno, line));
            }
        }
        let columns = columns.ok_or_else(|| Error::parse(path, 1, "missing column header"))?;
        Ok(Self {
            path: path.to_path_buf(),
            header,
            columns,
            rows,
        })
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.header
            .get(key)
            .ok_or_else(|| Error::parse(&self.path, 1, format!("missing header key '{key}'")))
    }

    pub fn require_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| Error::parse(&self.path, 1, format!("header key '{key}' has bad value '{raw}'")))
    }

    pub fn check_format(&self, kind: &str, version: u32) -> Result<()> {
        let found = self.require("format")?;
        if found != kind {
            return Err(Error::SchemaMismatch(format!("expected a {kind} file, found {found}")));
        }
        let v: u32 = self.require_parsed("schema_version")?;
        if v != version {
            return Err(Error::SchemaMismatch(format!("{kind} schema version {v}, expected {version}")));
        }
        Ok(())
    }

    /// Splits one data row into numbers, checking the field count.
    pub fn numbers(&self, lineno: usize, line: &str) -> Result<Vec<f64>> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != self.columns.len() {
            return Err(Error::parse(
                &self.path,
                lineno,
                format!("expected {} fields, found {}", self.columns.len(), fields.len()),
            ));
        }
        fields
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(&self.path, lineno, format!("'{f}' is not a number")))
            })
            .collect()
    }
}

/// Parses `a,b` into a pair of numbers.
pub fn parse_pair(text: &str) -> Option<(f64, f64)> {
    let (a, b) = text.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// FNV-1a, used for short content fingerprints in headers and manifests.
pub fn fingerprint(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn fingerprint_f64(values: impl IntoIterator<Item = f64>) -> u64 {
    fingerprint(values.into_iter().flat_map(|v| v.to_bits().to_le_bytes()))
}
