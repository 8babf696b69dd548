use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use orlicz_core::functionals::digest;
use serde::Serialize;

use crate::error::{io_error, CliError, CliResult};

/// Output directory that remembers what was written, for the manifest.
pub struct OutDir {
    path: PathBuf,
    written: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    seed: u64,
    version: &'a str,
    config_digest: String,
    started_unix: u64,
    finished_unix: u64,
    outputs: Vec<OutputEntry>,
}

#[derive(Serialize)]
struct OutputEntry {
    file: String,
    sha256: String,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl OutDir {
    pub fn create(path: &Path) -> CliResult<OutDir> {
        fs::create_dir_all(path).map_err(io_error(path))?;
        Ok(OutDir {
            path: path.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> CliResult<()> {
        let p = self.file(name);
        fs::write(&p, text).map_err(io_error(&p))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_toml<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let text = toml::to_string(value)
            .map_err(|e| CliError::Usage(format!("cannot serialize {name}: {e}")))?;
        self.write_text(name, &text)
    }

    /// Header row then data rows.
    pub fn write_csv(
        &mut self,
        name: &str,
        header: &[String],
        rows: &[Vec<String>],
    ) -> CliResult<()> {
        let p = self.file(name);
        let mut w = csv::Writer::from_path(&p)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush().map_err(io_error(&p))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_serialized<T: Serialize>(&mut self, name: &str, rows: &[T]) -> CliResult<()> {
        let p = self.file(name);
        let mut w = csv::Writer::from_path(&p)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush().map_err(io_error(&p))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn finish(
        mut self,
        command: &str,
        seed: u64,
        config_text: &str,
        started: u64,
    ) -> CliResult<()> {
        let mut outputs = Vec::with_capacity(self.written.len());
        for name in &self.written {
            let p = self.file(name);
            let bytes = fs::read(&p).map_err(io_error(&p))?;
            outputs.push(OutputEntry {
                file: name.clone(),
                sha256: digest(&[&String::from_utf8_lossy(&bytes)]),
            });
        }
        let m = Manifest {
            command,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            config_digest: digest(&[config_text]),
            started_unix: started,
            finished_unix: unix_now(),
            outputs,
        };
        self.write_toml("manifest.toml", &m)
    }
}

/// Shortest round-trip form, so identical values print identically.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
