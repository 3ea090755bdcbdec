use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Output directory of one experiment; every file lands via temp + rename.
#[derive(Clone, Debug)]
pub struct ArtifactDir {
    root: PathBuf,
    written: Vec<String>,
}

impl ArtifactDir {
    pub fn create(root: &Path) -> io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Relative paths written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Streams into a hidden temp file next to the target, then renames it into place.
    pub fn write_with(&mut self, rel: &str, fill: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<PathBuf> {
        let target = self.root.join(rel);
        let dir = target.parent().unwrap_or(&self.root).to_path_buf();
        fs::create_dir_all(&dir)?;
        let name = target.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
        let tmp = dir.join(format!(".{name}.tmp"));
        let result = (|| {
            let mut f = io::BufWriter::new(fs::File::create(&tmp)?);
            fill(&mut f)?;
            f.into_inner().map_err(|e| e.into_error())?.sync_all()
        })();
        if let Err(e) = result {
            let _ = fs::remove_file(&tmp);
            return Err(e);
        }
        fs::rename(&tmp, &target)?;
        self.written.push(rel.to_string());
        Ok(target)
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8]) -> io::Result<PathBuf> {
        self.write_with(rel, |w| w.write_all(bytes))
    }

    /// Pretty JSON with a trailing newline.
    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> io::Result<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_bytes(rel, &bytes)
    }
}

/// Run record; the only artifact allowed to differ between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub kind: String,
    /// SHA-256 of the resolved configuration as canonical JSON.
    pub config_digest: String,
    pub seed: Option<u64>,
    pub wall_time_seconds: f64,
    pub exit_status: i32,
    pub artifacts: Vec<String>,
}

pub const MANIFEST: &str = "manifest.json";

pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).unwrap_or_default();
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}
