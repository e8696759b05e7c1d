//! On-disk result cache keyed by a SHA-256 of the request.

use std::fs;
use std::io;
use std::path::PathBuf;

use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    /// Hex digest of the library version and the canonical request.
    pub fn digest(request: &Value) -> String {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update(b"\n");
        h.update(request.to_string().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, request: &Value) -> PathBuf {
        self.dir.join(format!("{}.json", Self::digest(request)))
    }

    /// A stored result, or `None` if absent or unreadable.
    pub fn get(&self, request: &Value) -> Option<Value> {
        let text = fs::read_to_string(self.path(request)).ok()?;
        let stored: Value = serde_json::from_str(&text).ok()?;
        (stored.get("request")? == request).then(|| stored.get("result").cloned())?
    }

    pub fn put(&self, request: &Value, result: &Value) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(request);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let body = serde_json::json!({"request": request, "result": result});
        fs::write(&tmp, body.to_string())?;
        fs::rename(&tmp, &path)
    }
}
