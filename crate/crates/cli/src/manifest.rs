use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Written next to every result: enough to rerun the command and check
/// that the outputs are byte-identical.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub format: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub seeds: BTreeMap<String, u64>,
    pub tool_version: &'static str,
    pub started: String,
    pub finished: String,
    /// Output path to lowercase hex sha256.
    pub outputs: BTreeMap<String, String>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn start(command: &str) -> Self {
        Self {
            format: "dynproof-manifest-v1",
            command: command.to_string(),
            argv: std::env::args().collect(),
            config: BTreeMap::new(),
            seeds: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            started: now(),
            finished: String::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }

    /// Records `seed` and the derived sub-seed of each named stream.
    pub fn seed(&mut self, seed: u64, streams: &[&str]) -> &mut Self {
        self.seeds.insert("seed".into(), seed);
        for s in streams {
            self.seeds.insert((*s).into(), dynproof::rng::sub_seed(seed, s));
        }
        self
    }

    pub fn output(&mut self, path: &Path) -> std::io::Result<()> {
        let digest = sha256_file(path)?;
        self.outputs.insert(path.display().to_string(), digest);
        Ok(())
    }

    /// `<output>.manifest.json`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn finish(mut self, path: &Path) -> std::io::Result<()> {
        self.finished = now();
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes") + "\n";
        std::fs::write(path, text)
    }
}
