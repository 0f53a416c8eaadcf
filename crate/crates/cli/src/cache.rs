//! Content-addressed cache of order spectra.
//!
//! Entries live under `<root>/v<kernel version>/<sha256>.json`, keyed by the
//! kernel version and the canonical spec text, so a version bump leaves old
//! entries unreachable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rho_lab_core::{GroupSpec, OrderSpectrum, KERNEL_VERSION};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_DIR_ENV: &str = "RHO_LAB_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    kernel_version: String,
    spec: String,
    spectrum: BTreeMap<u64, u64>,
}

#[derive(Clone, Debug)]
pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(root: impl AsRef<Path>) -> Self {
        Self { dir: root.as_ref().join(format!("v{KERNEL_VERSION}")) }
    }

    /// `$RHO_LAB_CACHE_DIR`, else `$XDG_CACHE_HOME/rho-lab`, else `~/.cache/rho-lab`.
    pub fn from_env() -> Option<Self> {
        let env = |k| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        env(CACHE_DIR_ENV)
            .or_else(|| env("XDG_CACHE_HOME").map(|d| d.join("rho-lab")))
            .or_else(|| env("HOME").map(|d| d.join(".cache").join("rho-lab")))
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(spec: &GroupSpec) -> String {
        let mut h = Sha256::new();
        h.update(KERNEL_VERSION.as_bytes());
        h.update(b"\n");
        h.update(spec.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, spec: &GroupSpec) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(spec)))
    }

    /// A missing, unreadable or foreign entry is a miss.
    pub fn get(&self, spec: &GroupSpec) -> Option<OrderSpectrum> {
        let text = fs::read_to_string(self.path(spec)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.kernel_version != KERNEL_VERSION || entry.spec != spec.to_string() {
            return None;
        }
        OrderSpectrum::new(entry.spectrum).ok()
    }

    /// Writes through a temporary file so readers never see a partial entry.
    pub fn put(&self, spec: &GroupSpec, spectrum: &OrderSpectrum) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let entry = Entry {
            kernel_version: KERNEL_VERSION.to_string(),
            spec: spec.to_string(),
            spectrum: spectrum.counts().clone(),
        };
        let path = self.path(spec);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_stability() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SpectrumCache::new(dir.path());
        let spec: GroupSpec = "C6".parse().unwrap();
        assert!(cache.get(&spec).is_none());
        let spectrum = OrderSpectrum::new([(1, 1), (2, 1), (3, 2), (6, 2)].into_iter().collect()).unwrap();
        cache.put(&spec, &spectrum).unwrap();
        assert_eq!(cache.get(&spec), Some(spectrum));
        assert_eq!(SpectrumCache::key(&spec), SpectrumCache::key(&"C6".parse().unwrap()));
        assert_ne!(SpectrumCache::key(&spec), SpectrumCache::key(&"C7".parse().unwrap()));
        assert!(cache.dir().ends_with(format!("v{KERNEL_VERSION}")));
    }
}
