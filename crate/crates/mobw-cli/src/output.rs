//! Output plumbing: run manifests, their stable hash, and stamped CSV
//! writing. Every artifact's first line is `# manifest=<hash>` so files can
//! be traced back to the exact configuration that produced them.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Sorted key=value run description. The hash covers exactly the rendered
/// text, so two runs with identical configurations share a hash regardless
/// of output directory.
#[derive(Debug)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("command".to_string(), command.to_string());
        Manifest { entries }
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push('=');
            out.push_str(value);
            out.push('\n');
        }
        out
    }

    pub fn hash(&self) -> String {
        format!("{:016x}", fnv1a64(self.render().as_bytes()))
    }

    /// Writes `manifest.txt`: the key=value lines plus the hash itself.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let text = format!("{}manifest={}\n", self.render(), self.hash());
        write_file(dir, "manifest.txt", &text)
    }
}

/// 64-bit FNV-1a; stable across platforms and releases.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &byte in bytes {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Writes a CSV table stamped with the manifest hash.
pub fn write_table(
    dir: &Path,
    name: &str,
    hash: &str,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<PathBuf> {
    let mut text = format!("# manifest={hash}\n{header}\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    write_file(dir, name, &text)
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
