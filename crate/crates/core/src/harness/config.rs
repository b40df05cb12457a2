//! Experiment configuration: a flat TOML file, CLI overrides, validation and
//! a stable hash of the effective settings.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::kernel::{KernelFamily, KernelSpec};
use crate::{Error, PointSet, Result};

/// Largest admissible candidate grid.
pub const MAX_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Bounds with the `c_τ(β)` constant.
    Thm42,
    /// Bounds with the `C₁, C₂` constants.
    Thm46,
}

impl Theorem {
    pub const ALL: [Theorem; 2] = [Theorem::Thm42, Theorem::Thm46];
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Thm42 => "thm42",
            Self::Thm46 => "thm46",
        })
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "thm42" | "4.2" => Ok(Self::Thm42),
            "thm46" | "4.6" => Ok(Self::Thm46),
            other => Err(Error::Config(format!("unknown theorem {other:?}, expected thm42 or thm46"))),
        }
    }
}

/// Settings as read from a file or the command line; unset keys take defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub d: Option<usize>,
    pub r: Option<f64>,
    pub grid_per_dim: Option<usize>,
    pub kernel: Option<String>,
    pub lengthscale: Option<f64>,
    pub noise_sd: Option<f64>,
    pub delta: Option<f64>,
    #[serde(rename = "T")]
    pub budget: Option<usize>,
    #[serde(rename = "T0")]
    pub initial_samples: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub theorem: Option<String>,
    pub kappa: Option<f64>,
}

impl RawConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Values set in `other` replace those in `self`.
    pub fn merge(self, other: RawConfig) -> RawConfig {
        RawConfig {
            d: other.d.or(self.d),
            r: other.r.or(self.r),
            grid_per_dim: other.grid_per_dim.or(self.grid_per_dim),
            kernel: other.kernel.or(self.kernel),
            lengthscale: other.lengthscale.or(self.lengthscale),
            noise_sd: other.noise_sd.or(self.noise_sd),
            delta: other.delta.or(self.delta),
            budget: other.budget.or(self.budget),
            initial_samples: other.initial_samples.or(self.initial_samples),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            theorem: other.theorem.or(self.theorem),
            kappa: other.kappa.or(self.kappa),
        }
    }

    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let r = self.r.unwrap_or(1.0);
        let family: KernelFamily = self.kernel.as_deref().unwrap_or("se").parse()?;
        let lengthscale = self.lengthscale.unwrap_or(0.2 * r);
        let kernel = KernelSpec::new(family, lengthscale).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = ExperimentConfig {
            d: self.d.unwrap_or(1),
            r,
            grid_per_dim: self.grid_per_dim.unwrap_or(200),
            kernel,
            noise_sd: self.noise_sd.unwrap_or(0.05),
            delta: self.delta.unwrap_or(0.1),
            budget: self.budget.unwrap_or(60),
            initial_samples: self.initial_samples.unwrap_or(1),
            trials: self.trials.unwrap_or(200),
            seed: self.seed.unwrap_or(20_240_601),
            theorem: self.theorem.as_deref().unwrap_or("thm46").parse()?,
            kappa: self.kappa,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Fully resolved, validated experiment settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    /// The domain is the box `[0, r]^d`.
    pub r: f64,
    pub grid_per_dim: usize,
    pub kernel: KernelSpec,
    pub noise_sd: f64,
    pub delta: f64,
    /// Total number of observations `T`.
    pub budget: usize,
    /// Initial random samples `T₀`.
    pub initial_samples: usize,
    pub trials: usize,
    pub seed: u64,
    /// Bound written into the trace files.
    pub theorem: Theorem,
    pub kappa: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        RawConfig::default().resolve().expect("defaults are valid")
    }
}

impl ExperimentConfig {
    pub fn grid_size(&self) -> Option<usize> {
        self.grid_per_dim.checked_pow(self.d as u32)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.d == 0 {
            return bad("d must be >= 1".into());
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return bad(format!("r must be > 0, got {}", self.r));
        }
        if self.grid_per_dim == 0 {
            return bad("grid_per_dim must be >= 1".into());
        }
        let n = match self.grid_size() {
            Some(n) if n <= MAX_GRID => n,
            _ => return bad(format!("grid_per_dim^d must not exceed {MAX_GRID}")),
        };
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return bad(format!("noise_sd must be >= 0, got {}", self.noise_sd));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.budget == 0 || self.budget > n {
            return bad(format!("T must lie in [1, {n}] (grid size), got {}", self.budget));
        }
        if self.initial_samples == 0 || self.initial_samples > self.budget {
            return bad(format!("T0 must lie in [1, T], got {}", self.initial_samples));
        }
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if let Some(k) = self.kappa {
            if !(k.is_finite() && k >= 0.0) {
                return bad(format!("kappa must be >= 0, got {k}"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<PointSet> {
        PointSet::grid(self.d, self.grid_per_dim, self.r)
    }

    pub fn is_noisy(&self) -> bool {
        self.noise_sd > 0.0
    }

    /// The effective configuration as TOML, keys in a fixed order.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("d", self.d.to_string());
        kv("r", float(self.r));
        kv("grid_per_dim", self.grid_per_dim.to_string());
        kv("kernel", format!("\"{}\"", self.kernel.family()));
        kv("lengthscale", float(self.kernel.lengthscale()));
        kv("noise_sd", float(self.noise_sd));
        kv("delta", float(self.delta));
        kv("T", self.budget.to_string());
        kv("T0", self.initial_samples.to_string());
        kv("trials", self.trials.to_string());
        kv("seed", self.seed.to_string());
        kv("theorem", format!("\"{}\"", self.theorem));
        if let Some(k) = self.kappa {
            kv("kappa", float(k));
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`Self::to_toml`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// One-line description for CSV metadata.
    pub fn metadata(&self) -> String {
        format!("config_hash={} seed={}", self.hash(), self.seed)
    }
}

/// TOML float literal; always carries a decimal point or exponent.
fn float(v: f64) -> String {
    let s = format!("{v:?}");
    if s.contains(['.', 'e', 'E', 'i', 'N']) { s } else { format!("{s}.0") }
}
