//! Append-only JSON-lines cache of invariant records.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use zhad::invariants::InvariantRecord;
use zhad::TypeSpec;

pub const CACHE_ENV: &str = "ZHAD_CACHE";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub tool_version: String,
    pub wall_time_ms: f64,
    pub record: InvariantRecord,
}

pub struct ResultsCache {
    path: PathBuf,
}

impl ResultsCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Entries written by this tool version. Unparseable lines are skipped.
    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => {
                return Err(e).with_context(|| format!("opening cache {}", self.path.display()))
            }
        };
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) {
                if entry.tool_version == TOOL_VERSION {
                    out.push(entry);
                }
            }
        }
        Ok(out)
    }

    /// Most recent record for `spec`.
    pub fn lookup(&self, spec: &TypeSpec) -> Result<Option<InvariantRecord>> {
        Ok(self
            .entries()?
            .into_iter()
            .rev()
            .find(|e| &e.record.spec == spec)
            .map(|e| e.record))
    }

    pub fn append(&self, record: &InvariantRecord, wall_time_ms: f64) -> Result<()> {
        let entry = CacheEntry {
            tool_version: TOOL_VERSION.to_string(),
            wall_time_ms,
            record: record.clone(),
        };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {}", self.path.display()))?;
        writeln!(file, "{}", serde_json::to_string(&entry)?)?;
        Ok(())
    }
}
