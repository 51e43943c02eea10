//! Run directories: `<root>/<timestamp>-<command>/` holding every output of one
//! invocation plus `manifest.json` with SHA-256 hashes and the full parameter set.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ansatz::SLOT_ORDER;
use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

/// Convention tags written into every manifest.
pub fn conventions() -> Value {
    json!({
        "version": 1,
        "pair_sum": "i<j, each pair once",
        "spin": "S = sigma/2",
        "hamiltonian": "H = -J sum_{i<j} (SxSx + SySy + Delta SzSz) / |i-j|^alpha, open chain",
        "endianness": "bit k of a basis index is qubit k (LSB = qubit 0); |0> = spin up",
        "rotations": "half-angle: CRZ = diag(exp(-i t/2), exp(i t/2)) on target, CRX = exp(-i t X/2)",
        "slot_order": SLOT_ORDER,
        "e_d": "E_exact - E_vqe, signed",
        "csv": "delta,alpha,value; alpha-major then delta ascending; %.16e; NaN = masked",
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Output directory of one invocation. Files are written only through
/// [`RunDir::write`] so the manifest sees all of them.
#[derive(Debug)]
pub struct RunDir {
    path: PathBuf,
    command: String,
    timestamp: String,
    files: BTreeMap<String, String>,
}

impl RunDir {
    pub fn create(root: &Path, command: &str) -> Result<Self> {
        let now = chrono::Utc::now();
        let timestamp = now.to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
        let stem = format!("{}-{command}", now.format("%Y%m%dT%H%M%S%.3fZ"));
        std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        let mut path = root.join(&stem);
        let mut k = 1;
        while path.exists() {
            path = root.join(format!("{stem}-{k}"));
            k += 1;
        }
        std::fs::create_dir(&path).map_err(|e| Error::io(&path, e))?;
        Ok(RunDir { path, command: command.into(), timestamp, files: BTreeMap::new() })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Writes `rel` (may contain `/`) and records its hash.
    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<PathBuf> {
        let full = self.path.join(rel);
        if let Some(parent) = full.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&full, bytes).map_err(|e| Error::io(&full, e))?;
        self.files.insert(rel.to_string(), sha256_hex(bytes));
        Ok(full)
    }

    pub fn files(&self) -> &BTreeMap<String, String> {
        &self.files
    }

    /// Writes the manifest; `status` is `"ok"` or a failure description.
    pub fn finish(self, parameters: Value, status: &str) -> Result<PathBuf> {
        let manifest = json!({
            "command": self.command,
            "timestamp": self.timestamp,
            "tool": format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            "status": status,
            "parameters": parameters,
            "conventions": conventions(),
            "files": self.files,
        });
        let text = serde_json::to_string_pretty(&manifest).expect("manifest is plain JSON") + "\n";
        let full = self.path.join(MANIFEST_NAME);
        std::fs::write(&full, text).map_err(|e| Error::io(&full, e))?;
        Ok(self.path)
    }
}
