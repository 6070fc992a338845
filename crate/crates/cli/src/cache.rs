//! On-disk result cache keyed by a digest of the operation kind, its numeric
//! parameters rounded to 12 significant digits, the policy fields and the
//! crate version. Entries carry a checksum verified on load; writes go
//! through a single-writer lock and an atomic rename.

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use zetalab::PrecisionPolicy;

static WRITE_LOCK: Mutex<()> = Mutex::new(());

/// Canonical digest key for one cacheable operation.
pub fn cache_key(kind: &str, params: &[(&str, f64)], policy: &PrecisionPolicy) -> String {
    let mut desc = format!("kind={kind};version={}", env!("CARGO_PKG_VERSION"));
    for (name, value) in params {
        desc.push_str(&format!(";{name}={value:.12e}"));
    }
    desc.push_str(&format!(
        ";abs_tol={:.12e};rel_tol={:.12e};mst={};mpd={}",
        policy.abs_tol, policy.rel_tol, policy.max_series_terms, policy.max_panel_depth
    ));
    let hash = Sha256::digest(desc.as_bytes());
    format!("{:x}", hash)
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    created_at_unix: u64,
    checksum: String,
    value: serde_json::Value,
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

/// Load a cached value; returns None on a miss or any verification failure.
pub fn load<T: DeserializeOwned>(dir: &Path, key: &str) -> Option<T> {
    let path = entry_path(dir, key);
    let text = std::fs::read_to_string(path).ok()?;
    let entry: CacheEntry = serde_json::from_str(&text).ok()?;
    if entry.key != key {
        return None;
    }
    let value_text = serde_json::to_string(&entry.value).ok()?;
    let checksum = format!("{:x}", Sha256::digest(value_text.as_bytes()));
    if checksum != entry.checksum {
        return None;
    }
    serde_json::from_value(entry.value).ok()
}

/// Store a value under the key, atomically.
pub fn store<T: Serialize>(dir: &Path, key: &str, value: &T) -> anyhow::Result<()> {
    let _guard = WRITE_LOCK.lock().unwrap();
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating cache dir {}", dir.display()))?;
    let value = serde_json::to_value(value)?;
    let value_text = serde_json::to_string(&value)?;
    let checksum = format!("{:x}", Sha256::digest(value_text.as_bytes()));
    let created_at_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let entry = CacheEntry {
        key: key.to_string(),
        created_at_unix,
        checksum,
        value,
    };
    let path = entry_path(dir, key);
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(&entry)?)
        .with_context(|| format!("writing cache entry {}", tmp.display()))?;
    std::fs::rename(&tmp, &path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_checksum() {
        let dir = std::env::temp_dir().join(format!("zetalab-cache-{}", std::process::id()));
        let p = PrecisionPolicy::default();
        let key = cache_key("test", &[("a", 1.5)], &p);
        store(&dir, &key, &vec![1.0f64, 2.0]).unwrap();
        let got: Vec<f64> = load(&dir, &key).unwrap();
        assert_eq!(got, vec![1.0, 2.0]);
        // corrupt the payload: load must reject it
        let path = entry_path(&dir, &key);
        let text = std::fs::read_to_string(&path).unwrap().replace("2.0", "3.0");
        std::fs::write(&path, text).unwrap();
        assert!(load::<Vec<f64>>(&dir, &key).is_none());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn keys_separate_by_policy() {
        let a = PrecisionPolicy::default();
        let b = PrecisionPolicy {
            rel_tol: 1e-7,
            ..a
        };
        assert_ne!(
            cache_key("moment", &[("upper", 10.0)], &a),
            cache_key("moment", &[("upper", 10.0)], &b)
        );
    }
}
