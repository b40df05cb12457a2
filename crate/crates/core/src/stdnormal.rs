//! Standard-normal primitives and the analysis functions built on them.
//!
//! The CDF goes through the complementary error function so that lower-tail
//! values such as Φ(−8) keep full relative precision. Nothing in this crate
//! computes a tail probability as `1 − Φ(x)`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::{Error, Result};

/// 1/√(2π), the peak value φ(0).
pub const PDF_AT_ZERO: f64 = 0.398_942_280_401_432_7;

const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 200;

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

#[inline]
pub(crate) fn phi(z: f64) -> f64 {
    PDF_AT_ZERO * (-0.5 * z * z).exp()
}

#[inline]
pub(crate) fn big_phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

#[inline]
pub(crate) fn tau_unchecked(z: f64) -> f64 {
    if z > 0.0 {
        // τ(z) = z + τ(−z) keeps τ(z) ≥ z exactly in floating point
        z + (phi(z) - z * big_phi(-z)).max(0.0)
    } else {
        z * big_phi(z) + phi(z)
    }
}

/// Standard normal density φ(z).
pub fn pdf(z: f64) -> Result<f64> {
    finite("z", z)?;
    Ok(phi(z))
}

/// Standard normal CDF Φ(z).
pub fn cdf(z: f64) -> Result<f64> {
    finite("z", z)?;
    Ok(big_phi(z))
}

/// τ(z) = zΦ(z) + φ(z). Positive and increasing, with τ′ = Φ.
pub fn tau(z: f64) -> Result<f64> {
    finite("z", z)?;
    Ok(tau_unchecked(z))
}

/// EI written in exploitation/exploration form: `a·Φ(a/b) + b·φ(a/b)`.
///
/// At `b = 0` the continuous extension `max(a, 0)` is returned.
pub fn ei_ab(a: f64, b: f64) -> Result<f64> {
    finite("a", a)?;
    finite("b", b)?;
    if b < 0.0 {
        return Err(Error::domain(format!("exploration b must be >= 0, got {b}")));
    }
    Ok(ei_ab_unchecked(a, b))
}

#[inline]
pub(crate) fn ei_ab_unchecked(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.max(0.0)
    } else if a > 0.0 {
        a + b * tau_unchecked(-a / b)
    } else {
        b * tau_unchecked(a / b)
    }
}

/// Parameters `(z, w, C₃)` shared by τ̄ and θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarTauParams {
    pub z: f64,
    pub w: f64,
    pub c3: f64,
}

impl BarTauParams {
    /// Requires `w > 0`, `c3 > w` and `z > −c3`; the last keeps θ strictly
    /// decreasing on the whole ρ domain.
    pub fn new(z: f64, w: f64, c3: f64) -> Result<Self> {
        finite("z", z)?;
        finite("w", w)?;
        finite("c3", c3)?;
        if w <= 0.0 {
            return Err(Error::domain(format!("w must be > 0, got {w}")));
        }
        if c3 <= w {
            return Err(Error::domain(format!("c3 must exceed w (c3 = {c3}, w = {w})")));
        }
        if z <= -c3 {
            return Err(Error::domain(format!("z must exceed -c3 (z = {z}, c3 = {c3})")));
        }
        Ok(Self { z, w, c3 })
    }

    /// Upper end `w / C₃` of the open ρ domain.
    pub fn rho_max(&self) -> f64 {
        self.w / self.c3
    }

    fn check_rho(&self, rho: f64) -> Result<()> {
        check_rho(rho, self.rho_max())
    }

    #[inline]
    fn arg(&self, rho: f64) -> f64 {
        (self.z + self.c3) * rho - self.w
    }
}

fn check_rho(rho: f64, rho_max: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 && rho < rho_max {
        Ok(())
    } else {
        Err(Error::domain(format!("rho must lie in (0, {rho_max}), got {rho}")))
    }
}

/// τ̄(ρ; z, w, C₃) = τ((z + C₃)ρ − w) / ρ.
pub fn bar_tau(rho: f64, p: &BarTauParams) -> Result<f64> {
    p.check_rho(rho)?;
    Ok(tau_unchecked(p.arg(rho)) / rho)
}

/// τ̃(ρ, z; w, C₁, C₃) = τ(C₁zρ + C₃ρ − w) / ρ, for `z ≥ 0`.
pub fn tilde_tau(rho: f64, z: f64, w: f64, c1: f64, c3: f64) -> Result<f64> {
    finite("z", z)?;
    finite("c1", c1)?;
    if z < 0.0 {
        return Err(Error::domain(format!("z must be >= 0, got {z}")));
    }
    if c1 <= 0.0 {
        return Err(Error::domain(format!("c1 must be > 0, got {c1}")));
    }
    let p = BarTauParams::new(0.0, w, c3)?;
    p.check_rho(rho)?;
    Ok(tau_unchecked(c1 * z * rho + c3 * rho - w) / rho)
}

/// θ(ρ) = −wΦ(u) + φ(u) with u = (z + C₃)ρ − w. Carries the sign of dτ̄/dρ.
pub fn theta(rho: f64, p: &BarTauParams) -> Result<f64> {
    p.check_rho(rho)?;
    Ok(theta_unchecked(rho, p))
}

#[inline]
fn theta_unchecked(rho: f64, p: &BarTauParams) -> f64 {
    let u = p.arg(rho);
    -p.w * big_phi(u) + phi(u)
}

/// Stationary point ρ̄ of τ̄ on `(0, w/C₃)`, i.e. the root of θ.
///
/// θ starts at τ(−w) > 0 and decreases strictly, so a root exists exactly when
/// θ is negative at the right end `ρ = w/C₃`. Otherwise τ̄ is monotone
/// decreasing on the domain and `None` is returned.
pub fn find_rho_bar(p: &BarTauParams) -> Option<f64> {
    let end = p.z * p.w / p.c3;
    if -p.w * big_phi(end) + phi(end) >= 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (0.0_f64, p.rho_max());
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if theta_unchecked(mid, p) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
