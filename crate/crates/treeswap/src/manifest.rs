//! Run manifests: `key=value` lines recording how an output was made.

use std::fs;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};

pub const FILE_NAME: &str = "manifest.txt";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut m = Manifest::default();
        m.set("command", command);
        m.set("version", env!("CARGO_PKG_VERSION"));
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace('\\', "\\\\").replace('\n', "\\n");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.into(), value)),
        }
    }

    /// Records the path and SHA-256 digest of an input file.
    pub fn input(&mut self, name: &str, path: &Path) -> io::Result<()> {
        self.set(&format!("input.{name}"), path.display());
        self.set(&format!("input.{name}.sha256"), sha256_file(path)?);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::write(dir.join(FILE_NAME), self.render())
    }
}
