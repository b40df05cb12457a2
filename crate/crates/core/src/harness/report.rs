//! Coverage statistics and CSV output.

use std::fmt::Display;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::Result;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Wilson score interval for `successes` out of `n` at critical value `z`.
pub fn wilson(successes: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Smallest frequency accepted for a nominal `1 − δ` event over `n` trials:
/// `(1 − δ) − 3√(δ(1 − δ)/n)`.
pub fn coverage_threshold(delta: f64, n: usize) -> f64 {
    (1.0 - delta) - 3.0 * (delta * (1.0 - delta) / n.max(1) as f64).sqrt()
}

/// Empirical frequency of an event with its acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub successes: usize,
    pub n: usize,
    pub frequency: f64,
    pub target: f64,
    pub threshold: f64,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
}

impl Coverage {
    pub fn new(successes: usize, n: usize, delta: f64) -> Self {
        let (wilson_lower, wilson_upper) = wilson(successes, n, Z_99);
        Self {
            successes,
            n,
            frequency: if n == 0 { 1.0 } else { successes as f64 / n as f64 },
            target: 1.0 - delta,
            threshold: coverage_threshold(delta, n),
            wilson_lower,
            wilson_upper,
        }
    }

    pub fn passes(&self) -> bool {
        self.frequency >= self.threshold
    }
}

/// Minimal CSV writer: a `#` metadata line, a header, then rows.
pub struct CsvWriter {
    out: BufWriter<fs::File>,
    width: usize,
}

impl CsvWriter {
    pub fn create(path: &Path, metadata: &str, header: &[&str]) -> Result<Self> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        writeln!(out, "# {metadata}")?;
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { out, width: header.len() })
    }

    /// Writes one row; `fields` must match the header width.
    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        debug_assert_eq!(fields.len(), self.width);
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Shorthand for building CSV fields.
pub fn f<T: Display>(v: T) -> String {
    v.to_string()
}
