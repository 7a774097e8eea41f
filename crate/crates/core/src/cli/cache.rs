//! Content-addressed store of finished reports, one JSON file per key.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::quot_vi::{Backend, VIConvention};
use crate::triangle::{DNormalizationPolicy, ModuliInput, TriangleReport};

#[derive(Serialize)]
struct KeyMaterial<'a> {
    schema_version: u32,
    command: &'a str,
    input: &'a ModuliInput,
    policy: &'a DNormalizationPolicy,
    convention: &'a VIConvention,
    backend: Backend,
}

pub struct Cache {
    dir: PathBuf,
    pub hits: usize,
    pub misses: usize,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache {
            dir: dir.to_path_buf(),
            hits: 0,
            misses: 0,
        }
    }

    pub fn key(
        command: &str,
        input: &ModuliInput,
        policy: &DNormalizationPolicy,
        convention: &VIConvention,
        backend: Backend,
    ) -> String {
        let material = KeyMaterial {
            schema_version: super::SCHEMA_VERSION,
            command,
            input,
            policy,
            convention,
            backend,
        };
        let canonical = serde_json::to_vec(&material).expect("key material serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn lookup(&mut self, key: &str) -> Option<TriangleReport> {
        let path = self.path(key);
        let found = match fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str::<TriangleReport>(&text) {
                Ok(rep) => Some(rep),
                Err(e) => {
                    log::warn!("ignoring corrupt cache entry {}: {e}", path.display());
                    None
                }
            },
            Err(_) => None,
        };
        if found.is_some() {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
        found
    }

    /// Writes through a temporary file and renames it into place.
    pub fn store(&self, key: &str, report: &TriangleReport) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut stored = report.clone();
        stored.timings = None;
        let text = serde_json::to_string(&stored).expect("report serializes");
        let tmp = tempfile_in(&self.dir, key);
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.path(key))
    }
}

fn tempfile_in(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!(".{key}.{}.tmp", std::process::id()))
}
