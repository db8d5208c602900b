use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance attached to every JSON output under `"manifest"`. The
/// duration is the only field that varies between identical invocations.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seed: u64,
    pub version: String,
    pub threads: usize,
    pub duration_ms: f64,
    pub inputs: Vec<InputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects input digests while a command runs.
pub struct ManifestBuilder {
    command: String,
    argv: Vec<String>,
    seed: u64,
    started: Instant,
    inputs: Vec<InputDigest>,
}

impl ManifestBuilder {
    pub fn new(command: &str, argv: &[String], seed: u64) -> Self {
        Self { command: command.to_string(), argv: argv.to_vec(), seed, started: Instant::now(), inputs: Vec::new() }
    }

    pub fn record_input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest { path: path.to_string(), sha256: sha256_hex(bytes) });
    }

    pub fn finish(&self) -> RunManifest {
        RunManifest {
            command: self.command.clone(),
            argv: self.argv.clone(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads: rayon::current_num_threads(),
            duration_ms: self.started.elapsed().as_secs_f64() * 1e3,
            inputs: self.inputs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
