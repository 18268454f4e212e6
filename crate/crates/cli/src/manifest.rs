//! Per-run manifest: command line, versions, seeds, effective configuration
//! and fingerprints of every file read or written.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use acqdesign::textio::{fingerprint, Header};
use anyhow::{Context, Result};

use crate::config::RunConfig;

pub struct Manifest {
    command: &'static str,
    dir: PathBuf,
    header: Header,
    started: Instant,
    files: Vec<(String, String)>,
}

fn file_hash(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("hashing {}", path.display()))?;
    Ok(format!("{:016x}", fingerprint(bytes)))
}

impl Manifest {
    pub fn start(command: &'static str, dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut header = Header::new("acqdesign-manifest", 1);
        header
            .set("command", command)
            .set("args", std::env::args().collect::<Vec<_>>().join(" "))
            .set("cli_version", env!("CARGO_PKG_VERSION"))
            .set("library_version", acqdesign::VERSION)
            .set(
                "started_unix",
                SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            );
        Ok(Self {
            command,
            dir: dir.to_path_buf(),
            header,
            started: Instant::now(),
            files: Vec::new(),
        })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.header.set(key, value);
        self
    }

    /// Records the effective configuration and writes it next to the manifest.
    pub fn config(&mut self, config: &RunConfig) -> &mut Self {
        let text = config.to_toml();
        self.header.set("config_hash", format!("{:016x}", fingerprint(text.bytes())));
        let path = self.dir.join(format!("config-{}.toml", self.command));
        if std::fs::write(&path, &text).is_ok() {
            self.files.push(("config".into(), path.display().to_string()));
        }
        self
    }

    pub fn input(&mut self, label: &str, path: &Path) -> Result<&mut Self> {
        let hash = file_hash(path)?;
        self.header.set(&format!("input_{label}"), format!("{} {hash}", path.display()));
        Ok(self)
    }

    pub fn output(&mut self, path: &Path) -> Result<&mut Self> {
        let hash = file_hash(path)?;
        self.files.push((hash, path.display().to_string()));
        Ok(self)
    }

    pub fn finish(mut self) -> Result<()> {
        self.header.set("elapsed_seconds", self.started.elapsed().as_secs_f64());
        let mut text = Vec::new();
        self.header.write_to(&mut text)?;
        let mut body = String::from_utf8(text).expect("ascii header");
        body.push_str("hash,path\n");
        for (hash, path) in &self.files {
            body.push_str(&format!("{hash},{path}\n"));
        }
        let path = self.dir.join(format!("manifest-{}.txt", self.command));
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        log::info!("manifest written to {}", path.display());
        Ok(())
    }
}
