//! Append-only result cache, one JSON record per line.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    /// Command and parameters, e.g. `search v=21 k=5 mode=first`.
    pub key: String,
    pub version: String,
    /// SHA-256 of the compact payload.
    pub digest: String,
    pub payload: Value,
}

impl CacheRecord {
    pub fn new(key: impl Into<String>, payload: Value) -> CacheRecord {
        CacheRecord::with_version(key, TOOL_VERSION, payload)
    }

    pub fn with_version(key: impl Into<String>, version: &str, payload: Value) -> CacheRecord {
        let digest = digest(&payload);
        CacheRecord { key: key.into(), version: version.into(), digest, payload }
    }

    pub fn digest_ok(&self) -> bool {
        digest(&self.payload) == self.digest
    }
}

fn digest(payload: &Value) -> String {
    let bytes = serde_json::to_vec(payload).expect("json values serialize");
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A lookup plus what had to be skipped along the way.
#[derive(Debug, Default)]
pub struct Lookup {
    pub record: Option<CacheRecord>,
    pub warnings: Vec<String>,
}

pub struct Cache {
    path: PathBuf,
    writer: Mutex<File>,
}

impl Cache {
    pub fn open(path: &Path) -> io::Result<Cache> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Cache { path: path.to_path_buf(), writer: Mutex::new(file) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn put(&self, record: &CacheRecord) -> io::Result<()> {
        let mut line = serde_json::to_vec(record)?;
        line.push(b'\n');
        let mut f = self.writer.lock().unwrap();
        if self.torn_tail()? {
            f.write_all(b"\n")?;
        }
        f.write_all(&line)?;
        f.flush()
    }

    /// The file does not end in a newline (an interrupted write).
    fn torn_tail(&self) -> io::Result<bool> {
        let mut r = File::open(&self.path)?;
        if r.metadata()?.len() == 0 {
            return Ok(false);
        }
        r.seek(SeekFrom::End(-1))?;
        let mut last = [0u8];
        r.read_exact(&mut last)?;
        Ok(last[0] != b'\n')
    }

    /// Latest record with this exact key and version.
    pub fn lookup(&self, key: &str, version: &str) -> io::Result<Lookup> {
        let mut out = Lookup::default();
        let reader = BufReader::new(File::open(&self.path)?);
        for (i, line) in reader.split(b'\n').enumerate() {
            let line = line?;
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            match serde_json::from_slice::<CacheRecord>(&line) {
                Ok(r) if !r.digest_ok() => {
                    out.warnings.push(format!("{}:{}: digest mismatch, skipped", self.path.display(), i + 1))
                }
                Ok(r) => {
                    if r.key == key && r.version == version {
                        out.record = Some(r);
                    }
                }
                Err(e) => out.warnings.push(format!("{}:{}: corrupt record skipped ({e})", self.path.display(), i + 1)),
            }
        }
        Ok(out)
    }

    /// [`Cache::lookup`] for the running version, with warnings sent to stderr.
    pub fn get(&self, key: &str) -> io::Result<Option<CacheRecord>> {
        let l = self.lookup(key, TOOL_VERSION)?;
        for w in &l.warnings {
            eprintln!("warning: {w}");
        }
        Ok(l.record)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_is_stable() {
        let a = CacheRecord::new("k", json!({"a": 1}));
        let b = CacheRecord::new("k", json!({"a": 1}));
        assert_eq!(a.digest, b.digest);
        assert_eq!(a.digest.len(), 64);
        assert!(a.digest_ok());
        let mut c = a.clone();
        c.payload = json!({"a": 2});
        assert!(!c.digest_ok());
    }
}
