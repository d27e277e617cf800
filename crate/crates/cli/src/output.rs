use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Single writer for every artifact of a run.
pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Output {
            dir: dir.to_path_buf(),
        })
    }

    fn write(&self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        f.write_all(bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn csv(
        &self,
        name: &str,
        fill: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> CliResult<()> {
        let mut buf = Vec::new();
        fill(&mut buf).expect("writing to memory");
        self.write(name, &buf)
    }
}
