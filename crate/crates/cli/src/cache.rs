//! Flat-file result cache under `HF_CACHE_DIR`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped with the engine so stale results are never reused.
pub const CODE_VERSION: &str = concat!("hf-core ", env!("CARGO_PKG_VERSION"));

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn from_env() -> Option<Cache> {
        let dir = std::env::var_os("HF_CACHE_DIR")?;
        if dir.is_empty() {
            return None;
        }
        Some(Cache { dir: dir.into() })
    }

    /// File name for a request; `parts` is serialized with sorted keys.
    pub fn key(parts: &Value) -> String {
        let text = serde_json::to_string(
            &serde_json::json!({ "request": parts, "version": CODE_VERSION }),
        )
        .expect("cache key serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, value: &Value) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string_pretty(value).expect("result serializes");
        write_atomic(&self.path(key), text.as_bytes())
    }
}

/// Write to a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
