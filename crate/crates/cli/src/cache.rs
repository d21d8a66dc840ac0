//! On-disk cache of exact coefficient tables.
//!
//! Layout: `<dir>/v<FORMAT_VERSION>/<tag>-k<k>-o<order>.json`, one JSON document per
//! entry. Writers hold an exclusive lock on `<dir>/v<N>/.lock` and publish through
//! a rename, so readers never see partial files.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use plusrank_core::serial::FORMAT_VERSION;

use crate::error::CliError;

const LOCK_FILE: &str = ".lock";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryName {
    pub tag: String,
    pub k: u32,
    pub order: usize,
}

impl EntryName {
    pub fn file_name(&self) -> String {
        format!("{}-k{}-o{}.json", self.tag, self.k, self.order)
    }

    fn parse(name: &str) -> Option<EntryName> {
        let stem = name.strip_suffix(".json")?;
        let (rest, order) = stem.rsplit_once("-o")?;
        let (tag, k) = rest.rsplit_once("-k")?;
        Some(EntryName { tag: tag.to_string(), k: k.parse().ok()?, order: order.parse().ok()? })
    }
}

pub struct Cache {
    root: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { root: dir.join(format!("v{FORMAT_VERSION}")) }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn lock(&self, exclusive: bool) -> Result<File, CliError> {
        fs::create_dir_all(&self.root).map_err(io_err(&self.root))?;
        let path = self.root.join(LOCK_FILE);
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(io_err(&path))?;
        if exclusive {
            file.lock().map_err(io_err(&path))?;
        } else {
            file.lock_shared().map_err(io_err(&path))?;
        }
        Ok(file)
    }

    /// Entries currently stored, sorted by file name.
    pub fn entries(&self) -> Result<Vec<EntryName>, CliError> {
        if !self.root.exists() {
            return Ok(Vec::new());
        }
        let _guard = self.lock(false)?;
        let mut out: Vec<EntryName> = fs::read_dir(&self.root)
            .map_err(io_err(&self.root))?
            .filter_map(|e| e.ok())
            .filter_map(|e| EntryName::parse(&e.file_name().to_string_lossy()))
            .collect();
        out.sort_by_key(|e| e.file_name());
        Ok(out)
    }

    /// Smallest stored entry for `(tag, k)` with order at least `order`.
    pub fn find(&self, tag: &str, k: u32, order: usize) -> Result<Option<EntryName>, CliError> {
        Ok(self
            .entries()?
            .into_iter()
            .filter(|e| e.tag == tag && e.k == k && e.order >= order)
            .min_by_key(|e| e.order))
    }

    pub fn load<T: DeserializeOwned>(&self, entry: &EntryName) -> Result<T, CliError> {
        let _guard = self.lock(false)?;
        let path = self.root.join(entry.file_name());
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        serde_json::from_slice(&bytes).map_err(|source| CliError::Corrupt { path, source })
    }

    pub fn store<T: Serialize>(&self, entry: &EntryName, value: &T) -> Result<PathBuf, CliError> {
        let _guard = self.lock(true)?;
        let path = self.root.join(entry.file_name());
        let tmp = self.root.join(format!(".{}.tmp", entry.file_name()));
        let bytes = serde_json::to_vec(value).expect("coefficient tables always serialise");
        let mut file = File::create(&tmp).map_err(io_err(&tmp))?;
        file.write_all(&bytes).map_err(io_err(&tmp))?;
        file.sync_all().map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))?;
        Ok(path)
    }

    /// Removes every entry; returns how many were deleted.
    pub fn clear(&self) -> Result<usize, CliError> {
        let entries = self.entries()?;
        let _guard = self.lock(true)?;
        for e in &entries {
            let path = self.root.join(e.file_name());
            fs::remove_file(&path).map_err(io_err(&path))?;
        }
        Ok(entries.len())
    }
}
