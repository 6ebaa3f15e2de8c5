//! On-disk store of multiplication tables, one file per system, guarded by
//! a SHA-256 checksum. Unreadable or corrupt entries are recomputed; an
//! unwritable directory degrades to memory only.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::indexed::{GroupTables, IndexedGroup};
use crate::system::SystemKey;

pub const CACHE_ENV: &str = "SCHUBERT_CACHE_DIR";

const FORMAT_TAG: &str = "schubert-tables-v1";

pub struct GroupCache {
    dir: Option<PathBuf>,
    disk_ok: AtomicBool,
    memory: DashMap<SystemKey, Arc<IndexedGroup>>,
}

impl GroupCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        let disk_ok = match &dir {
            Some(d) => match std::fs::create_dir_all(d) {
                Ok(()) => true,
                Err(e) => {
                    log::warn!("cache directory {} unusable ({e}); keeping tables in memory", d.display());
                    false
                }
            },
            None => false,
        };
        GroupCache {
            dir,
            disk_ok: AtomicBool::new(disk_ok),
            memory: DashMap::new(),
        }
    }

    pub fn in_memory() -> Self {
        Self::new(None)
    }

    pub fn dir_from_env() -> Option<PathBuf> {
        std::env::var_os(CACHE_ENV).map(PathBuf::from)
    }

    pub fn uses_disk(&self) -> bool {
        self.disk_ok.load(Ordering::Relaxed)
    }

    /// Path of the entry for a system. The key covers the full generating
    /// set, the only parabolic the store tabulates.
    pub fn entry_path(&self, key: SystemKey) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}{}-all.tables", key.label, key.rank)))
    }

    pub fn group(&self, key: SystemKey) -> Result<Arc<IndexedGroup>> {
        if let Some(g) = self.memory.get(&key) {
            return Ok(g.clone());
        }
        let g = match self.load(key) {
            Some(g) => g,
            None => {
                let g = IndexedGroup::from_weyl(&crate::weyl::WeylGroup::build(
                    key.label,
                    key.rank as usize,
                )?)?;
                self.store(key, g.tables());
                g
            }
        };
        let g = Arc::new(g);
        self.memory.insert(key, g.clone());
        Ok(g)
    }

    fn load(&self, key: SystemKey) -> Option<IndexedGroup> {
        if !self.uses_disk() {
            return None;
        }
        let path = self.entry_path(key)?;
        let bytes = std::fs::read(&path).ok()?;
        match decode(&bytes).and_then(|t| {
            if t.system != key {
                return None;
            }
            IndexedGroup::from_tables(t).ok()
        }) {
            Some(g) => Some(g),
            None => {
                log::warn!("cache entry {} is corrupt; recomputing", path.display());
                None
            }
        }
    }

    fn store(&self, key: SystemKey, tables: &GroupTables) {
        if !self.uses_disk() {
            return;
        }
        let Some(path) = self.entry_path(key) else {
            return;
        };
        if let Err(e) = write_atomic(&path, &encode(tables)) {
            log::warn!("cannot write cache entry {} ({e}); keeping tables in memory", path.display());
            self.disk_ok.store(false, Ordering::Relaxed);
        }
    }
}

fn checksum(payload: &[u8]) -> String {
    hex::encode(Sha256::digest(payload))
}

/// `<tag> <sha256>\n<json>`
fn encode(tables: &GroupTables) -> Vec<u8> {
    let payload = serde_json::to_vec(tables).expect("tables serialize");
    let mut out = format!("{FORMAT_TAG} {}\n", checksum(&payload)).into_bytes();
    out.extend(payload);
    out
}

fn decode(bytes: &[u8]) -> Option<GroupTables> {
    let nl = bytes.iter().position(|&b| b == b'\n')?;
    let header = std::str::from_utf8(&bytes[..nl]).ok()?;
    let (tag, sum) = header.split_once(' ')?;
    let payload = &bytes[nl + 1..];
    if tag != FORMAT_TAG || sum != checksum(payload) {
        return None;
    }
    serde_json::from_slice(payload).ok()
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = temp_path(dir, path);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn temp_path(dir: &Path, path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    dir.join(format!(
        ".{name}.{}.{:?}.tmp",
        std::process::id(),
        std::thread::current().id()
    ))
}
