use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::error::CliResult;

/// Files produced by one command, written together once it has finished.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn write_all(self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents)
                .with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn report(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}
