//! Append-only JSON-lines cache of `pi` results.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::record::PiRecord;

pub const ENV_DIR: &str = "SCELL_CACHE_DIR";
const FILE: &str = "pi.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub mode: String,
    pub x: String,
    pub primes: Vec<u64>,
    pub precision: i64,
    pub trials: usize,
    pub seed: u64,
    pub resample_limit: usize,
    pub version: String,
}

#[derive(Serialize, Deserialize)]
struct Line {
    key: CacheKey,
    value: PiRecord,
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<CacheKey, PiRecord>,
}

impl Cache {
    /// Opens the cache in `$SCELL_CACHE_DIR` (default `./.scell-cache`).
    pub fn open_default() -> Result<Cache> {
        let dir = std::env::var_os(ENV_DIR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".scell-cache"));
        Cache::open(&dir)
    }

    /// Loads every readable line; lines from other versions or that fail to parse are skipped.
    pub fn open(dir: &Path) -> Result<Cache> {
        let path = dir.join(FILE);
        let mut entries = HashMap::new();
        if let Ok(f) = fs::File::open(&path) {
            for line in BufReader::new(f).lines() {
                let Ok(line) = line else { break };
                if let Ok(l) = serde_json::from_str::<Line>(&line) {
                    if l.key.version == crate::VERSION {
                        entries.entry(l.key).or_insert(l.value);
                    }
                }
            }
        }
        Ok(Cache { path, entries })
    }

    pub fn get(&self, key: &CacheKey) -> Option<&PiRecord> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends new records; keys already present are left alone.
    pub fn append(&mut self, records: Vec<(CacheKey, PiRecord)>) -> Result<()> {
        let fresh: Vec<_> = records.into_iter().filter(|(k, _)| !self.entries.contains_key(k)).collect();
        if fresh.is_empty() {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        let mut buf = String::new();
        for (key, value) in fresh {
            let line = Line { key, value };
            buf.push_str(&serde_json::to_string(&line)?);
            buf.push('\n');
            self.entries.insert(line.key, line.value);
        }
        f.write_all(buf.as_bytes())?;
        Ok(())
    }
}
