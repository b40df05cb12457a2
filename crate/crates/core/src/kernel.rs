//! Stationary unit-variance covariance functions.
//!
//! Every kernel here satisfies `k(x, x) = 1` and `0 < k(x, x') ≤ 1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::{Error, PointSet, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const SQRT_5: f64 = 2.236_067_977_499_79;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    SquaredExponential,
    /// Matérn ν = 1/2 (exponential kernel).
    Matern12,
    Matern32,
    Matern52,
}

impl KernelFamily {
    /// Matérn family for a half-integer smoothness ν ∈ {1/2, 3/2, 5/2}.
    pub fn matern(nu: f64) -> Result<Self> {
        match nu {
            0.5 => Ok(Self::Matern12),
            1.5 => Ok(Self::Matern32),
            2.5 => Ok(Self::Matern52),
            _ => Err(Error::domain(format!("matern smoothness must be 1/2, 3/2 or 5/2, got {nu}"))),
        }
    }

    /// Smoothness ν, infinite for the SE kernel.
    pub fn nu(self) -> f64 {
        match self {
            Self::SquaredExponential => f64::INFINITY,
            Self::Matern12 => 0.5,
            Self::Matern32 => 1.5,
            Self::Matern52 => 2.5,
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SquaredExponential => "se",
            Self::Matern12 => "matern12",
            Self::Matern32 => "matern32",
            Self::Matern52 => "matern52",
        })
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "se" | "rbf" | "squared_exponential" => Ok(Self::SquaredExponential),
            "matern12" | "matern-1/2" => Ok(Self::Matern12),
            "matern32" | "matern-3/2" => Ok(Self::Matern32),
            "matern52" | "matern-5/2" => Ok(Self::Matern52),
            other => Err(Error::Config(format!("unknown kernel family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    lengthscale: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, lengthscale: f64) -> Result<Self> {
        if !(lengthscale.is_finite() && lengthscale > 0.0) {
            return Err(Error::domain(format!("lengthscale must be > 0, got {lengthscale}")));
        }
        Ok(Self { family, lengthscale })
    }

    pub fn squared_exponential(lengthscale: f64) -> Result<Self> {
        Self::new(KernelFamily::SquaredExponential, lengthscale)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    /// Covariance as a function of Euclidean distance.
    #[inline]
    pub fn of_distance(&self, dist: f64) -> f64 {
        let rho = dist / self.lengthscale;
        match self.family {
            KernelFamily::SquaredExponential => (-0.5 * rho * rho).exp(),
            KernelFamily::Matern12 => (-rho).exp(),
            KernelFamily::Matern32 => (1.0 + SQRT_3 * rho) * (-SQRT_3 * rho).exp(),
            KernelFamily::Matern52 => {
                (1.0 + SQRT_5 * rho + 5.0 * rho * rho / 3.0) * (-SQRT_5 * rho).exp()
            }
        }
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], x2: &[f64]) -> f64 {
        let sq: f64 = x.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum();
        self.of_distance(sq.sqrt())
    }

    pub fn eval(&self, x: &[f64], x2: &[f64]) -> Result<f64> {
        if x.len() != x2.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: x2.len() });
        }
        Ok(self.eval_unchecked(x, x2))
    }

    /// Gram matrix `K[i][j] = k(x_i, x_j)`; symmetric by construction.
    pub fn gram(&self, pts: &PointSet) -> DMatrix<f64> {
        let n = pts.len();
        let mut k = DMatrix::from_element(n, n, 1.0);
        for i in 0..n {
            for j in 0..i {
                let v = self.eval_unchecked(pts.row(i), pts.row(j));
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        k
    }

    /// Cross-covariance vector `[k(x_1, x), …, k(x_t, x)]`.
    pub fn cross(&self, pts: &PointSet, x: &[f64]) -> Result<DVector<f64>> {
        pts.check_dim(x)?;
        Ok(DVector::from_iterator(pts.len(), pts.rows().map(|r| self.eval_unchecked(r, x))))
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(lengthscale={})", self.family, self.lengthscale)
    }
}
