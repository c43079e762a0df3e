//! Deterministic file output: CSV tables, binary PGM images and JSON
//! sidecar metadata.
//!
//! Floats are printed with Rust's shortest round-trip representation, so a
//! parsed CSV recovers the in-memory values bit for bit and repeated runs
//! produce byte-identical files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// Shortest decimal representation that parses back to the same f64.
pub fn format_float(v: f64) -> String {
    format!("{v}")
}

/// Write a CSV table with LF line endings.
pub fn write_csv<P: AsRef<Path>>(path: P, header: &[String], rows: &[Vec<String>]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}

/// Min-max normalize values to 8-bit gray; non-finite entries map to 0.
/// Returns the pixel bytes together with the normalization bounds.
pub fn normalize_grayscale(values: &[f64]) -> (Vec<u8>, f64, f64) {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let pixels = values
        .iter()
        .map(|&v| {
            if !v.is_finite() || span <= 0.0 {
                0u8
            } else {
                (((v - min) / span) * 255.0).round() as u8
            }
        })
        .collect();
    (pixels, min, max)
}

/// Binary (P5) grayscale image, row-major, 8 bits per pixel.
pub fn write_pgm<P: AsRef<Path>>(path: P, width: usize, height: usize, pixels: &[u8]) -> io::Result<()> {
    assert_eq!(pixels.len(), width * height, "pixel buffer does not match dimensions");
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(pixels)?;
    out.flush()
}

/// Sidecar metadata written next to every image output.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization_max: Option<f64>,
}

impl Sidecar {
    pub fn new(command: &str) -> Self {
        Self {
            tool: "splitstep".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            parameters: BTreeMap::new(),
            normalization_min: None,
            normalization_max: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn write<P: AsRef<Path>>(&self, path: P) -> io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        let text = serde_json::to_string_pretty(self).expect("sidecar serialization cannot fail");
        writeln!(out, "{text}")?;
        out.flush()
    }
}
