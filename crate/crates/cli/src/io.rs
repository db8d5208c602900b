use std::fmt::Write as _;
use std::io::ErrorKind;
use std::path::Path;

use idealpoly_core::stats::{VmaxSource, VolumeSample};
use idealpoly_core::triang::{RawTriangulation, SphereTriangulation};
use serde::de::DeserializeOwned;

use crate::error::CliError;
use crate::manifest::ManifestBuilder;

/// Reads an input file and records its digest.
pub fn read_input(path: &Path, manifest: &mut ManifestBuilder) -> Result<Vec<u8>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => CliError::InputNotFound { path: path.display().to_string() },
        _ => CliError::InputRead { path: path.display().to_string(), message: e.to_string() },
    })?;
    manifest.record_input(&path.display().to_string(), &bytes);
    Ok(bytes)
}

pub fn parse_json<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::parse(path, e))
}

pub fn read_triangulation(path: &Path, manifest: &mut ManifestBuilder) -> Result<SphereTriangulation, CliError> {
    let bytes = read_input(path, manifest)?;
    let raw: RawTriangulation = parse_json(path, &bytes)?;
    SphereTriangulation::validate(raw).map_err(|e| CliError::InvalidTriangulation(e.to_string()))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::write(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn source_name(s: VmaxSource) -> &'static str {
    match s {
        VmaxSource::Table => "table",
        VmaxSource::Search => "search",
        VmaxSource::Given => "given",
    }
}

/// CSV with `#` metadata lines, a `volume` header and one volume per line.
pub fn sample_csv(sample: &VolumeSample) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# n={}", sample.n);
    let _ = writeln!(out, "# seed={}", sample.seed);
    let _ = writeln!(out, "# vmax={}", sample.vmax);
    let _ = writeln!(out, "# vmax_source={}", source_name(sample.vmax_source));
    let _ = writeln!(out, "# count={}", sample.volumes.len());
    out.push_str("volume\n");
    for v in &sample.volumes {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn parse_sample_csv(path: &Path, bytes: &[u8]) -> Result<VolumeSample, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::parse(path, e))?;
    let (mut n, mut seed, mut vmax, mut source) = (None, 0u64, None, VmaxSource::Given);
    let mut volumes = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line == "volume" {
            continue;
        }
        let bad = |what: &str| CliError::parse(path, format!("line {}: {what}", lineno + 1));
        if let Some(meta) = line.strip_prefix('#') {
            let Some((key, value)) = meta.trim().split_once('=') else { continue };
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(value.parse().map_err(|_| bad("bad n"))?),
                "seed" => seed = value.parse().map_err(|_| bad("bad seed"))?,
                "vmax" => vmax = Some(value.parse().map_err(|_| bad("bad vmax"))?),
                "vmax_source" => {
                    source = match value {
                        "table" => VmaxSource::Table,
                        "search" => VmaxSource::Search,
                        _ => VmaxSource::Given,
                    }
                }
                _ => {}
            }
            continue;
        }
        let v: f64 = line.parse().map_err(|_| bad("not a number"))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(bad("volumes must be positive"));
        }
        volumes.push(v);
    }
    let n = n.ok_or_else(|| CliError::parse(path, "missing '# n=' metadata"))?;
    let vmax = vmax.ok_or_else(|| CliError::parse(path, "missing '# vmax=' metadata"))?;
    Ok(VolumeSample { n, seed, vmax, vmax_source: source, volumes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let s = VolumeSample {
            n: 8,
            seed: 3,
            vmax: 6.488469,
            vmax_source: VmaxSource::Table,
            volumes: vec![0.1 + 0.2, 1.0 / 3.0, 5.123456789012345],
        };
        let back = parse_sample_csv(Path::new("x.csv"), sample_csv(&s).as_bytes()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn csv_without_vmax_is_rejected() {
        let err = parse_sample_csv(Path::new("x.csv"), b"# n=8\nvolume\n1.0\n").unwrap_err();
        assert_eq!(err.code(), "INPUT_PARSE");
    }
}
