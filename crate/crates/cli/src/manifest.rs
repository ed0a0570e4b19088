//! Machine-readable record of one command run: input hashes, parameters,
//! tool version and written outputs. Contains no timestamps so identical
//! runs produce identical manifests.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputRecord {
    pub fn hash(role: &str, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(Self {
            role: role.to_owned(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: serde_json::Value,
    pub inputs: Vec<InputRecord>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, parameters: serde_json::Value) -> Self {
        Self {
            tool: "keymine",
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
            audit: None,
        }
    }

    pub fn input(&mut self, role: &str, path: &Path) -> Result<()> {
        self.inputs.push(InputRecord::hash(role, path)?);
        Ok(())
    }

    pub fn file_name(&self) -> String {
        format!("{}.manifest.json", self.command)
    }
}

/// Writes files under one output directory and remembers their names.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)
            .with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(name.to_owned());
        Ok(path)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Writes the manifest last, listing every file written before it.
    pub fn finish(mut self, mut manifest: RunManifest) -> Result<Vec<PathBuf>> {
        manifest.outputs = self.written.clone();
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        let name = manifest.file_name();
        self.write(&name, &json)?;
        Ok(self.written.iter().map(|n| self.root.join(n)).collect())
    }
}
