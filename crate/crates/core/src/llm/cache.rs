//! Content-addressed on-disk replay cache: one JSON file per
//! (model, temperature, sample index, prompt) tuple, keyed by the SHA-256 of
//! those fields. Reads are lock-free; writes go through a temp file and an
//! atomic rename.

use super::LlmError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub model: String,
    pub temperature: f64,
    pub sample_index: u32,
    pub prompt: String,
    pub response: String,
}

#[derive(Debug, Clone)]
pub struct ReplayCache {
    dir: PathBuf,
}

impl ReplayCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplayCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(model: &str, temperature: f64, sample_index: u32, prompt: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(model.as_bytes());
        hasher.update([0]);
        hasher.update(format!("{temperature}").as_bytes());
        hasher.update([0]);
        hasher.update(sample_index.to_le_bytes());
        hasher.update([0]);
        hasher.update(prompt.as_bytes());
        hex::encode(hasher.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(
        &self,
        model: &str,
        temperature: f64,
        sample_index: u32,
        prompt: &str,
    ) -> Result<Option<String>, LlmError> {
        let path = self.path_for(&Self::key(model, temperature, sample_index, prompt));
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(LlmError::Cache(format!("{}: {e}", path.display()))),
        };
        let entry: CacheEntry = serde_json::from_str(&text)
            .map_err(|e| LlmError::Cache(format!("{}: {e}", path.display())))?;
        if entry.prompt != prompt || entry.sample_index != sample_index {
            return Err(LlmError::Cache(format!(
                "{}: hash collision or corrupted entry",
                path.display()
            )));
        }
        Ok(Some(entry.response))
    }

    pub fn put(&self, entry: &CacheEntry) -> Result<(), LlmError> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| LlmError::Cache(format!("{}: {e}", self.dir.display())))?;
        let path = self.path_for(&Self::key(
            &entry.model,
            entry.temperature,
            entry.sample_index,
            &entry.prompt,
        ));
        let tmp = path.with_extension("json.tmp");
        let payload = serde_json::to_string_pretty(entry)
            .map_err(|e| LlmError::Cache(e.to_string()))?;
        std::fs::write(&tmp, payload)
            .map_err(|e| LlmError::Cache(format!("{}: {e}", tmp.display())))?;
        std::fs::rename(&tmp, &path)
            .map_err(|e| LlmError::Cache(format!("{}: {e}", path.display())))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ReplayCache::new(dir.path());
        assert_eq!(cache.get("m", 0.0, 0, "p").unwrap(), None);
        cache
            .put(&CacheEntry {
                model: "m".into(),
                temperature: 0.0,
                sample_index: 0,
                prompt: "p".into(),
                response: "r".into(),
            })
            .unwrap();
        assert_eq!(cache.get("m", 0.0, 0, "p").unwrap(), Some("r".into()));
        // a different sample index is a different entry
        assert_eq!(cache.get("m", 0.0, 1, "p").unwrap(), None);
    }

    #[test]
    fn keys_separate_fields() {
        let a = ReplayCache::key("m", 0.0, 0, "p");
        let b = ReplayCache::key("m", 0.0, 1, "p");
        let c = ReplayCache::key("n", 0.0, 0, "p");
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
