//! The gallery manifest: one entry per rendered image with the `GeneratorSpec` that
//! produced it and a content hash.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{GeneratorSpec, Params};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("duplicate image id `{0}`")]
    DuplicateId(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub family: String,
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
    /// Relative paths resolve against the manifest's directory.
    pub path: String,
    pub sha256: String,
}

impl ManifestEntry {
    pub fn image_id(family: &str, seed: u64) -> String {
        format!("{family}-s{seed}")
    }

    pub fn spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            family: self.family.clone(),
            params: self.params.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub images: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ManifestError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let m: Manifest = serde_json::from_str(&text).map_err(|source| ManifestError::Json {
            path: path.display().to_string(),
            source,
        })?;
        m.check_ids()?;
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ManifestError> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(path, text).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn check_ids(&self) -> Result<(), ManifestError> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.images {
            if !seen.insert(e.id.as_str()) {
                return Err(ManifestError::DuplicateId(e.id.clone()));
            }
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&ManifestEntry> {
        self.images.iter().find(|e| e.id == id)
    }

    /// Families in first-appearance order.
    pub fn families(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.images {
            if !out.contains(&e.family.as_str()) {
                out.push(&e.family);
            }
        }
        out
    }
}

/// Where an entry's image lives, given the directory holding the manifest.
pub fn resolve(manifest_dir: &Path, entry: &ManifestEntry) -> PathBuf {
    let p = Path::new(&entry.path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        manifest_dir.join(p)
    }
}
