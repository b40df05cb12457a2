//! Confidence constants, simple-regret bounds and convergence-rate envelopes.
//!
//! Two bound families are provided for GP-prior objectives: the `c_τ(β)` form
//! (`Thm42*`) and the sharper `C₁, C₂` form (`Thm46*`). Both hold with
//! probability at least `1 − δ` for some window index `t_k ∈ [t/m − 1, t]`.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::eiopt::Trace;
use crate::stdnormal::{big_phi, tau_unchecked, PDF_AT_ZERO};
use crate::{Error, Result};

/// `(1 + 2π)/(2π)`.
pub const C_ALPHA: f64 = (1.0 + 2.0 * PI) / (2.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundFlavor {
    Thm42Noisy,
    Thm42Noiseless,
    Thm46Noisy,
    Thm46Noiseless,
    RateNoiseless,
    RateNoisy,
    RkhsLemma,
    RkhsImproved(f64),
}

impl BoundFlavor {
    pub fn is_noisy(self) -> bool {
        matches!(self, Self::Thm42Noisy | Self::Thm46Noisy | Self::RateNoisy)
    }
}

impl fmt::Display for BoundFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Thm42Noisy => f.write_str("thm42_noisy"),
            Self::Thm42Noiseless => f.write_str("thm42_noiseless"),
            Self::Thm46Noisy => f.write_str("thm46_noisy"),
            Self::Thm46Noiseless => f.write_str("thm46_noiseless"),
            Self::RateNoiseless => f.write_str("rate_noiseless"),
            Self::RateNoisy => f.write_str("rate_noisy"),
            Self::RkhsLemma => f.write_str("rkhs_lemma"),
            Self::RkhsImproved(b) => write!(f, "rkhs_improved(B={b})"),
        }
    }
}

/// δ-derived constants of one bound.
///
/// `w`, `c1`, `c2`, `c3` are zero for the `c_τ` flavors, and `c_tau` is zero
/// for the `C₁, C₂` flavors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub delta: f64,
    pub beta: f64,
    pub w: f64,
    pub c_alpha: f64,
    pub c_tau: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub window_divisor: usize,
    pub t_min: f64,
    pub flavor: BoundFlavor,
}

impl BoundConstants {
    /// Offset in the `1/(t − offset)` factor of the bound.
    pub fn denominator_offset(&self) -> usize {
        self.window_divisor
    }

    /// Whether the bound is defined and asserted at `t`.
    pub fn is_valid_t(&self, t: usize) -> bool {
        t > self.denominator_offset() && t as f64 >= self.t_min
    }

    /// Smallest `t` at which the bound is asserted.
    pub fn first_valid_t(&self) -> usize {
        let from_t_min = self.t_min.max(0.0).ceil() as usize;
        from_t_min.max(self.denominator_offset() + 1)
    }

    /// Lower end of the window, `max(⌈t/m⌉ − 1, 0)`.
    pub fn window_start(&self, t: usize) -> usize {
        t.div_ceil(self.window_divisor).saturating_sub(1)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")))
    }
}

/// `c_τ(β) = τ(√β)/τ(−√β)`.
pub fn c_tau(beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::domain(format!("beta must be > 0, got {beta}")));
    }
    let s = beta.sqrt();
    Ok(tau_unchecked(s) / tau_unchecked(-s))
}

fn three_step_t_min(delta: f64, m: f64) -> f64 {
    m * (3.0 / delta).ln() / LN_2 + m
}

pub fn constants_thm42(delta: f64, noisy: bool) -> Result<BoundConstants> {
    check_delta(delta)?;
    let (beta, window_divisor, t_min, flavor) = if noisy {
        ((6.0 / delta).ln() * 2.0, 3, three_step_t_min(delta, 3.0), BoundFlavor::Thm42Noisy)
    } else {
        ((2.0 / delta).ln() * 2.0, 2, 0.0, BoundFlavor::Thm42Noiseless)
    };
    Ok(BoundConstants {
        delta,
        beta,
        w: 0.0,
        c_alpha: C_ALPHA,
        c_tau: c_tau(beta)?,
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
        window_divisor,
        t_min,
        flavor,
    })
}

fn with_w(delta: f64, beta: f64, w: f64, window_divisor: usize, t_min: f64, flavor: BoundFlavor) -> BoundConstants {
    let tail = big_phi(-w);
    let c1 = 1.0 / tail;
    let c3 = PDF_AT_ZERO / tail;
    BoundConstants {
        delta,
        beta,
        w,
        c_alpha: C_ALPHA,
        c_tau: 0.0,
        c1,
        c2: c3 + beta.sqrt(),
        c3,
        window_divisor,
        t_min,
        flavor,
    }
}

pub fn constants_thm46(delta: f64, noisy: bool) -> Result<BoundConstants> {
    check_delta(delta)?;
    Ok(if noisy {
        let beta = 2.0 * (9.0 * C_ALPHA / delta).ln();
        let w = (2.0 * (9.0 / (2.0 * delta)).ln()).sqrt();
        with_w(delta, beta, w, 3, three_step_t_min(delta, 3.0), BoundFlavor::Thm46Noisy)
    } else {
        let beta = 2.0 * (3.0 * C_ALPHA / delta).ln();
        with_w(delta, beta, beta.sqrt(), 2, 0.0, BoundFlavor::Thm46Noiseless)
    })
}

/// Constants of the rate statements: the `C₁, C₂` choices with the wider
/// windows used there (`t/4` noisy, `t/3` noiseless).
pub fn constants_rate(delta: f64, noisy: bool) -> Result<BoundConstants> {
    let base = constants_thm46(delta, noisy)?;
    Ok(if noisy {
        BoundConstants {
            window_divisor: 4,
            t_min: three_step_t_min(delta, 4.0),
            flavor: BoundFlavor::RateNoisy,
            ..base
        }
    } else {
        BoundConstants { window_divisor: 3, flavor: BoundFlavor::RateNoiseless, ..base }
    })
}

fn check_t_delta(t: usize, delta: f64) -> Result<()> {
    check_delta(delta)?;
    if t == 0 {
        return Err(Error::domain("t must be >= 1"));
    }
    Ok(())
}

/// `c_t^σ = 2 log(π²t²/(2δ))`.
pub fn c_t_sigma(t: usize, delta: f64) -> Result<f64> {
    check_t_delta(t, delta)?;
    let t = t as f64;
    Ok(2.0 * (PI * PI * t * t / (2.0 * delta)).ln())
}

/// `β_t = 2 log(π²t²/(6δ))`.
pub fn beta_t_seq(t: usize, delta: f64) -> Result<f64> {
    check_t_delta(t, delta)?;
    let t = t as f64;
    Ok(2.0 * (PI * PI * t * t / (6.0 * delta)).ln())
}

fn check_bound_args(c: &BoundConstants, t: usize, m: f64, noise_sd: f64, sigma_win: f64) -> Result<()> {
    if t <= c.denominator_offset() {
        return Err(Error::domain(format!("t = {t} must exceed {}", c.denominator_offset())));
    }
    for (name, v) in [("M", m), ("noise_sd", noise_sd), ("sigma_win", sigma_win)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    Ok(())
}

/// `2m/(t − m)` times the (noise-inflated) amplitude, with `m` the window divisor.
fn drift_term(c: &BoundConstants, t: usize, m: f64, noise_sd: f64) -> Result<f64> {
    let k = c.window_divisor as f64;
    let amp = if c.flavor.is_noisy() { m + c_t_sigma(t, c.delta)?.sqrt() * noise_sd } else { m };
    Ok(2.0 * k * amp / (t as f64 - k))
}

/// `c_τ(β)[2m(M + √c_t^σ σ)/(t − m) + (√β + φ(0))σ_win]`; the noise term is
/// dropped for the noiseless flavor.
pub fn bound_thm42(c: &BoundConstants, t: usize, m: f64, noise_sd: f64, sigma_win: f64) -> Result<f64> {
    if !matches!(c.flavor, BoundFlavor::Thm42Noisy | BoundFlavor::Thm42Noiseless) {
        return Err(Error::domain(format!("bound_thm42 called with {} constants", c.flavor)));
    }
    check_bound_args(c, t, m, noise_sd, sigma_win)?;
    Ok(c.c_tau * (drift_term(c, t, m, noise_sd)? + (c.beta.sqrt() + PDF_AT_ZERO) * sigma_win))
}

/// `C₁·2m(M + √c_t^σ σ)/(t − m) + (C₁√β + C₂)σ_win`; also serves the rate flavors.
pub fn bound_thm46(c: &BoundConstants, t: usize, m: f64, noise_sd: f64, sigma_win: f64) -> Result<f64> {
    if !matches!(
        c.flavor,
        BoundFlavor::Thm46Noisy | BoundFlavor::Thm46Noiseless | BoundFlavor::RateNoisy | BoundFlavor::RateNoiseless
    ) {
        return Err(Error::domain(format!("bound_thm46 called with {} constants", c.flavor)));
    }
    check_bound_args(c, t, m, noise_sd, sigma_win)?;
    Ok(c.c1 * drift_term(c, t, m, noise_sd)? + sigma_coefficient(c) * sigma_win)
}

/// Coefficient multiplying `σ_{t_k}(x_{t_k+1})` in the bound.
pub fn sigma_coefficient(c: &BoundConstants) -> f64 {
    match c.flavor {
        BoundFlavor::Thm42Noisy | BoundFlavor::Thm42Noiseless => c.c_tau * (c.beta.sqrt() + PDF_AT_ZERO),
        _ => c.c1 * c.beta.sqrt() + c.c2,
    }
}

/// Bound for any GP-prior flavor.
pub fn bound(c: &BoundConstants, t: usize, m: f64, noise_sd: f64, sigma_win: f64) -> Result<f64> {
    match c.flavor {
        BoundFlavor::Thm42Noisy | BoundFlavor::Thm42Noiseless => bound_thm42(c, t, m, noise_sd, sigma_win),
        _ => bound_thm46(c, t, m, noise_sd, sigma_win),
    }
}

/// Coefficients of the noisy bounds written as `C₄·6(M + √c_t^σ σ)/(t − 3) + C₅·σ_win`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientComparison {
    pub beta_42: f64,
    pub c4_42: f64,
    pub c5_42: f64,
    pub beta_46: f64,
    pub c1: f64,
    pub c2: f64,
    pub c4_46: f64,
    pub c5_46: f64,
}

pub fn compare_coefficients(delta: f64) -> Result<CoefficientComparison> {
    let a = constants_thm42(delta, true)?;
    let b = constants_thm46(delta, true)?;
    Ok(CoefficientComparison {
        beta_42: a.beta,
        c4_42: a.c_tau,
        c5_42: sigma_coefficient(&a),
        beta_46: b.beta,
        c1: b.c1,
        c2: b.c2,
        c4_46: b.c1,
        c5_46: sigma_coefficient(&b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateKind {
    SquaredExponential,
    Matern { nu: f64 },
    /// Noiseless envelope for kernels with smoothness `ν` and log exponent `α`.
    Bull { nu: f64, alpha: f64 },
}

/// Power of `1/t` in the envelope for dimension `d`.
pub fn rate_exponent(kind: RateKind, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("d must be >= 1"));
    }
    let d = d as f64;
    match kind {
        RateKind::SquaredExponential => Ok(0.5),
        RateKind::Matern { nu } if nu > 0.0 => Ok(nu / (2.0 * nu + d)),
        RateKind::Bull { nu, alpha } if nu > 0.0 && alpha >= 0.0 => Ok(nu.min(1.0) / d),
        _ => Err(Error::domain(format!("invalid rate parameters {kind:?}"))),
    }
}

/// `scale` times the named decay envelope at `t`:
/// SE `t^{−1/2} log(t)^{(d+1)/2}`, Matérn `(log t / t)^{ν/(2ν+d)}`,
/// Bull `(3/(t−3))^{min(ν,1)/d} log^η(t/3)` with `η = α` for `ν ≤ 1`, else 0.
pub fn rate_envelope(kind: RateKind, t: usize, d: usize, scale: f64) -> Result<f64> {
    if t < 4 {
        return Err(Error::domain(format!("rate envelope needs t >= 4, got {t}")));
    }
    let p = rate_exponent(kind, d)?;
    let tf = t as f64;
    let v = match kind {
        RateKind::SquaredExponential => tf.powf(-0.5) * tf.ln().powf((d as f64 + 1.0) / 2.0),
        RateKind::Matern { .. } => (tf.ln() / tf).powf(p),
        RateKind::Bull { nu, alpha } => {
            let eta = if nu <= 1.0 { alpha } else { 0.0 };
            (3.0 / (tf - 3.0)).powf(p) * (tf / 3.0).ln().powf(eta)
        }
    };
    Ok(scale * v)
}

/// Bounds for objectives of RKHS norm at most `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkhsBounds {
    /// `c_τ(B)[4M/(t − 2) + (B + φ(0))σ_win]`.
    pub lemma_bound: f64,
    /// `4C₁M/(t − 2) + (C₁B + C₂)σ_win` with `C₁ = 1/Φ(−B)`, `C₂ = B + φ(0)/Φ(−B)`.
    pub improved_bound: f64,
    pub c_r: f64,
    /// `σ_win` coefficients of the two bounds.
    pub lemma_coefficient: f64,
    pub improved_coefficient: f64,
}

/// `c_r(B) = τ(B)(B + φ(0))/(Φ(−B)B + B + φ(0))`.
pub fn c_r(b: f64) -> Result<f64> {
    if !(b.is_finite() && b >= 1.0) {
        return Err(Error::domain(format!("B must be >= 1, got {b}")));
    }
    Ok(tau_unchecked(b) * (b + PDF_AT_ZERO) / (big_phi(-b) * b + b + PDF_AT_ZERO))
}

pub fn rkhs_constants(b: f64) -> Result<(BoundConstants, BoundConstants)> {
    c_r(b)?;
    let lemma = BoundConstants {
        delta: 0.0,
        beta: b * b,
        w: 0.0,
        c_alpha: C_ALPHA,
        c_tau: tau_unchecked(b) / tau_unchecked(-b),
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
        window_divisor: 2,
        t_min: 0.0,
        flavor: BoundFlavor::RkhsLemma,
    };
    let tail = big_phi(-b);
    let improved = BoundConstants {
        w: b,
        c_tau: 0.0,
        c1: 1.0 / tail,
        c2: b + PDF_AT_ZERO / tail,
        c3: PDF_AT_ZERO / tail,
        flavor: BoundFlavor::RkhsImproved(b),
        ..lemma
    };
    Ok((lemma, improved))
}

pub fn rkhs_bounds(b: f64, t: usize, m: f64, sigma_win: f64) -> Result<RkhsBounds> {
    let (lemma, improved) = rkhs_constants(b)?;
    check_bound_args(&lemma, t, m, 0.0, sigma_win)?;
    let drift = 4.0 * m / (t as f64 - 2.0);
    let lemma_coefficient = lemma.c_tau * (b + PDF_AT_ZERO);
    let improved_coefficient = improved.c1 * b + improved.c2;
    Ok(RkhsBounds {
        lemma_bound: lemma.c_tau * drift + lemma_coefficient * sigma_win,
        improved_bound: improved.c1 * drift + improved_coefficient * sigma_win,
        c_r: c_r(b)?,
        lemma_coefficient,
        improved_coefficient,
    })
}

/// Outcome of testing a bound against a recorded run at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub t: usize,
    pub bound: f64,
    pub r_t: f64,
    pub holds: bool,
    /// Largest `σ_{t_k}(x_{t_k+1})` over the window; enters `bound`.
    pub sigma_win_max: f64,
    /// Smallest value over the window, kept as a diagnostic.
    pub sigma_win_min: f64,
}

/// Evaluates the bound at `t` with the window maximum of `σ_{t_k}(x_{t_k+1})`
/// and compares it with `r_t` from the trace. Window rows not recorded in the
/// trace (before the first EI step) are skipped.
pub fn empirical_bound_check(trace: &Trace, c: &BoundConstants, m: f64, noise_sd: f64, t: usize) -> Result<BoundCheck> {
    let (first, last) = match (trace.first_t(), trace.last_t()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::TraceTooShort { t, first: 0, last: 0 }),
    };
    if t < first || t > last {
        return Err(Error::TraceTooShort { t, first, last });
    }
    if !c.is_valid_t(t) {
        return Err(Error::domain(format!("t = {t} is below the validity threshold {}", c.first_valid_t())));
    }
    let lo = c.window_start(t).max(first);
    let (mut hi_s, mut lo_s) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in lo..=t {
        let s = trace.rows[k - first].sigma_next;
        hi_s = hi_s.max(s);
        lo_s = lo_s.min(s);
    }
    let value = bound(c, t, m, noise_sd, hi_s.clamp(0.0, 1.0))?;
    let r_t = trace.rows[t - first].r_t;
    Ok(BoundCheck { t, bound: value, r_t, holds: r_t <= value, sigma_win_max: hi_s, sigma_win_min: lo_s })
}
