//! On-disk cache of per-task orbit counts.
//!
//! One JSON file per (group, t1, t2). The file stores its full key, so a
//! changed definition, fingerprint or format version is a miss rather than
//! a stale hit.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::orbits::ComponentCount;
use crate::typesys::TypeTuple;

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub version: u32,
    pub group: String,
    pub fingerprint: String,
    /// Canonical text of the group definition; element ids depend on it.
    pub definition: String,
    pub t1: String,
    pub t2: String,
    pub exchange: bool,
}

impl CacheKey {
    pub fn new(
        group: &str,
        fingerprint: String,
        definition: String,
        t1: &TypeTuple,
        t2: &TypeTuple,
        exchange: bool,
    ) -> Self {
        CacheKey {
            version: CACHE_VERSION,
            group: group.to_string(),
            fingerprint,
            definition,
            t1: t1.to_string(),
            t2: t2.to_string(),
            exchange,
        }
    }

    fn file_name(&self) -> String {
        let clean =
            |s: &str| -> String { s.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect() };
        format!("v{}_{}_{}_{}.json", self.version, clean(&self.group), clean(&self.t1), clean(&self.t2))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    count: ComponentCount,
}

#[derive(Clone, Debug)]
pub struct TaskCache {
    dir: PathBuf,
}

impl TaskCache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(TaskCache { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, key: &CacheKey) -> Option<ComponentCount> {
        let text = fs::read_to_string(self.dir.join(key.file_name())).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.count)
    }

    /// Writes through a temporary file so a crash never leaves a torn entry.
    pub fn put(&self, key: &CacheKey, count: &ComponentCount) -> io::Result<()> {
        let path = self.dir.join(key.file_name());
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(&Entry { key: key.clone(), count: count.clone() })?;
        fs::write(&tmp, text)?;
        fs::rename(tmp, path)
    }
}
