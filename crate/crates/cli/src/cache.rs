//! Content-addressed on-disk cache of Schubert restriction tables.
//!
//! A file is named by the SHA-256 of its key (theory, root system, `Δ_P`,
//! convention version) and stores the key alongside the rendered table. Any
//! unreadable, mismatched or malformed file counts as a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use flagqk::algebra::LaurentPoly;
use flagqk::gkm::{install_table, schubert_table, Table, Theory, CONVENTION_VERSION};
use flagqk::{FlagVariety, Result};

pub const CACHE_ENV: &str = "FLAGQK_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    rank: usize,
    rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key<T: Theory>(space: &FlagVariety) -> String {
        format!(
            "flagqk-table;v{CONVENTION_VERSION};{};{};{:?}",
            T::NAME,
            space.group().cartan_type(),
            space.delta_p().indices()
        )
    }

    pub fn path<T: Theory>(&self, space: &FlagVariety) -> PathBuf {
        let digest = Sha256::digest(Self::key::<T>(space).as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    /// Installs the cached table of `space` if present; otherwise computes
    /// it and stores it. Cache I/O failures never change results.
    pub fn warm<T: Theory>(&self, space: &FlagVariety) -> Result<()> {
        let path = self.path::<T>(space);
        if let Some(table) = self.load::<T>(space, &path) {
            if install_table::<T>(space, table).is_ok() {
                return Ok(());
            }
        }
        let table = schubert_table::<T>(space)?;
        if let Err(e) = self.store::<T>(space, &path, &table) {
            eprintln!(
                "warning: could not write cache file {}: {e}",
                path.display()
            );
        }
        Ok(())
    }

    fn load<T: Theory>(&self, space: &FlagVariety, path: &Path) -> Option<Table> {
        let text = fs::read_to_string(path).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != Self::key::<T>(space) || entry.rank != space.rank() {
            return None;
        }
        entry
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| LaurentPoly::parse(c, entry.rank, "y").ok())
                    .collect()
            })
            .collect()
    }

    fn store<T: Theory>(
        &self,
        space: &FlagVariety,
        path: &Path,
        table: &Table,
    ) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            key: Self::key::<T>(space),
            rank: space.rank(),
            rows: table
                .iter()
                .map(|r| r.iter().map(|c| c.render("y")).collect())
                .collect(),
        };
        let body = serde_json::to_string(&entry).map_err(std::io::Error::other)?;
        // write-then-rename so readers never see a partial file
        let tmp = self.dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("table"),
            std::process::id()
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, path)
    }
}
