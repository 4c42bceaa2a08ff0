//! Append-only JSONL result cache.
//!
//! One record per line. A record stores the output document of a decided
//! computation (stats removed) under a canonical key, plus a SHA-256 of that
//! document. Lines that fail to parse or whose hash does not match are
//! skipped and counted. Re-storing a key with a different value is an error.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub value: Value,
    /// Hex SHA-256 of the canonical serialization of `value`.
    pub attestation: String,
    /// Seconds since the Unix epoch; not hashed.
    pub created_at: u64,
}

impl CacheRecord {
    pub fn new(key: String, value: Value) -> Self {
        let attestation = attest(&value);
        let created_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CacheRecord {
            key,
            value,
            attestation,
            created_at,
        }
    }

    pub fn is_intact(&self) -> bool {
        attest(&self.value) == self.attestation
    }
}

/// Hex SHA-256 of `value` serialized compactly (object keys are sorted by
/// `serde_json`'s default map).
pub fn attest(value: &Value) -> String {
    let bytes = serde_json::to_vec(value).expect("JSON values always serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// Canonical key from an operation name and `(name, value)` parameters.
pub fn cache_key(op: &str, params: &[(&str, String)]) -> String {
    let mut ps: Vec<_> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    ps.sort();
    format!("{op}?{}", ps.join("&"))
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    records: HashMap<String, CacheRecord>,
    skipped: usize,
}

impl Cache {
    /// Loads `path`; a missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = HashMap::new();
        let mut skipped = 0;
        match File::open(&path) {
            Ok(file) => {
                for line in BufReader::new(file).lines() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<CacheRecord>(&line) {
                        Ok(r) if r.is_intact() => {
                            records.entry(r.key.clone()).or_insert(r);
                        }
                        _ => skipped += 1,
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        }
        Ok(Cache { path, records, skipped })
    }

    /// Lines ignored while loading.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lookup(&self, key: &str) -> Option<&CacheRecord> {
        self.records.get(key)
    }

    /// Appends a record. Storing an identical value again is a no-op; a
    /// different value for a known key is an error.
    pub fn append(&mut self, record: CacheRecord) -> Result<()> {
        if let Some(old) = self.records.get(&record.key) {
            if old.value != record.value {
                return Err(Error::Cache(format!(
                    "cached value for {} differs from the recomputed one ({} vs {})",
                    record.key, old.attestation, record.attestation
                )));
            }
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))?;
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        file.write_all(line.as_bytes())
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))?;
        self.records.insert(record.key.clone(), record);
        Ok(())
    }
}
