//! Content-addressed cache of result documents. Writes go through a
//! temporary file in the same directory and are renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "MIRROR_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cache {
    root: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { root: None }
    }

    /// Uses `dir`, creating it if needed; caching is disabled when it cannot
    /// be created.
    pub fn at(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        match std::fs::create_dir_all(dir) {
            Ok(()) => Cache { root: Some(dir.to_path_buf()) },
            Err(_) => Cache::disabled(),
        }
    }

    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::at(d),
            _ => Cache::disabled(),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.root.is_some()
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        Some(self.root.as_ref()?.join(format!("{kind}-{key}.json")))
    }

    pub fn get(&self, kind: &str, key: &str) -> Option<String> {
        std::fs::read_to_string(self.path(kind, key)?).ok()
    }

    /// Stores `contents`; failures leave the cache unchanged and are reported.
    pub fn put(&self, kind: &str, key: &str, contents: &str) -> std::io::Result<()> {
        let (Some(root), Some(path)) = (self.root.as_ref(), self.path(kind, key)) else {
            return Ok(());
        };
        let mut tmp = tempfile::NamedTempFile::new_in(root)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}
