//! Expected-improvement acquisition and the GP-EI loop.

use rand::Rng;

use crate::gp::{self, GpState, Posterior, PriorSample};
use crate::kernel::KernelSpec;
use crate::rng::{self, Stream};
use crate::stdnormal::ei_ab_unchecked;
use crate::{Error, PointSet, Result};

/// Below this posterior standard deviation EI switches to its `σ → 0` limit.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Improvement `max(y⁺ − f(x), 0)`.
pub fn improvement(y_plus: f64, f_x: f64) -> f64 {
    (y_plus - f_x).max(0.0)
}

/// Closed-form EI from a posterior: `σ·τ((y⁺ − μ)/σ)`, or `max(y⁺ − μ, 0)`
/// when `σ ≤ SIGMA_FLOOR`.
#[inline]
pub fn ei_from_posterior(p: Posterior, y_plus: f64) -> f64 {
    if p.sigma > SIGMA_FLOOR {
        ei_ab_unchecked(y_plus - p.mu, p.sigma)
    } else {
        (y_plus - p.mu).max(0.0)
    }
}

pub fn ei(state: &GpState, y_plus: f64, x: &[f64]) -> Result<f64> {
    Ok(ei_from_posterior(state.posterior(x)?, y_plus))
}

/// The EI maximizer over a candidate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub ei: f64,
    pub posterior: Posterior,
}

fn select(posteriors: &[Posterior], y_plus: f64) -> Result<Selection> {
    let mut best: Option<Selection> = None;
    for (index, &p) in posteriors.iter().enumerate() {
        let ei = ei_from_posterior(p, y_plus);
        // strict comparison keeps the lowest index among ties
        if best.is_none_or(|b| ei > b.ei) {
            best = Some(Selection { index, ei, posterior: p });
        }
    }
    best.ok_or(Error::EmptyCandidates)
}

/// Exhaustive argmax of EI over `candidates`; ties go to the lowest index.
pub fn argmax_ei(state: &GpState, y_plus: f64, candidates: &PointSet) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    select(&state.posterior_many(candidates)?, y_plus)
}

/// Settings of one GP-EI run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopOptions {
    pub kernel: KernelSpec,
    /// Observation noise standard deviation σ; zero means noiseless.
    pub noise_sd: f64,
    /// Total number of observations `T`, initial ones included.
    pub budget: usize,
    /// Number of uniformly drawn initial samples `T₀`.
    pub initial_samples: usize,
    /// Stop as soon as the maximal EI falls below this value.
    pub kappa: Option<f64>,
}

impl LoopOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return Err(Error::Config(format!("noise_sd must be >= 0, got {}", self.noise_sd)));
        }
        if self.initial_samples == 0 || self.initial_samples > self.budget {
            return Err(Error::Config(format!(
                "need 1 <= T0 <= T, got T0 = {} and T = {}",
                self.initial_samples, self.budget
            )));
        }
        if let Some(k) = self.kappa {
            if !(k.is_finite() && k >= 0.0) {
                return Err(Error::Config(format!("kappa must be >= 0, got {k}")));
            }
        }
        Ok(())
    }
}

/// An initial (non-EI) observation.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialSample {
    pub index: usize,
    pub y: f64,
    /// Posterior before this point was observed.
    pub mu_before: f64,
    pub sigma_before: f64,
}

/// One EI step taken with `t` observations in hand.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: usize,
    /// Grid index of `x_{t+1}`.
    pub index: usize,
    pub x_next: Vec<f64>,
    pub y_next: f64,
    /// Best observation `y_t⁺`.
    pub y_plus: f64,
    pub mu_next: f64,
    pub sigma_next: f64,
    pub ei_next: f64,
    /// `σ_t(x*)`.
    pub sigma_at_star: f64,
    /// `y_t⁺ − f*`.
    pub r_t: f64,
    /// `f(x_t⁺) − f*`, with `x_t⁺` the location of `y_t⁺`.
    pub r0_t: f64,
}

/// Record of a GP-EI run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub seed: u64,
    pub noise_sd: f64,
    pub f_star: f64,
    pub m_bound: f64,
    pub initial: Vec<InitialSample>,
    pub rows: Vec<TraceRow>,
}

impl Trace {
    /// Row recorded with `t` observations in hand.
    pub fn row(&self, t: usize) -> Option<&TraceRow> {
        let first = self.rows.first()?.t;
        t.checked_sub(first).and_then(|i| self.rows.get(i))
    }

    pub fn first_t(&self) -> Option<usize> {
        self.rows.first().map(|r| r.t)
    }

    pub fn last_t(&self) -> Option<usize> {
        self.rows.last().map(|r| r.t)
    }

    /// `σ_{i−1}(x_i)` for every observation in order, initial ones included.
    pub fn sigma_before_each(&self) -> Vec<f64> {
        self.initial
            .iter()
            .map(|s| s.sigma_before)
            .chain(self.rows.iter().map(|r| r.sigma_next))
            .collect()
    }

    /// Variance-sum inequality over the whole run; `None` when noiseless.
    pub fn variance_sum_check(&self) -> Option<gp::VarianceSumCheck> {
        if self.noise_sd > 0.0 {
            gp::variance_sum_check(&self.sigma_before_each(), self.noise_sd * self.noise_sd).ok()
        } else {
            None
        }
    }
}

/// Runs GP-EI on a prior sample, using the sample's grid as candidate set.
///
/// `T₀` initial points are drawn uniformly from the grid, then each step picks
/// the EI maximizer, observes it with Gaussian noise and refits, until `T`
/// observations have been made or the maximal EI drops below `κ`.
pub fn run(opts: &LoopOptions, sample: &PriorSample, seed: u64) -> Result<Trace> {
    opts.validate()?;
    let grid = &sample.grid;
    let n = grid.len();
    if n == 0 {
        return Err(Error::EmptyCandidates);
    }
    let mut init_rng = rng::stream(seed, Stream::Init);
    let mut noise_rng = rng::stream(seed, Stream::Noise);
    let noise_var = opts.noise_sd * opts.noise_sd;
    let mut observe = |idx: usize| sample.f[idx] + opts.noise_sd * rng::standard_normal(&mut noise_rng);

    let mut state = GpState::prior(opts.kernel, grid.dim(), noise_var)?;
    let mut ys: Vec<f64> = Vec::with_capacity(opts.budget);
    let mut idxs: Vec<usize> = Vec::with_capacity(opts.budget);
    let mut initial = Vec::with_capacity(opts.initial_samples);
    for _ in 0..opts.initial_samples {
        let index = init_rng.random_range(0..n);
        let before = state.posterior(grid.row(index))?;
        let y = observe(index);
        state = state.update(grid.row(index), y)?;
        ys.push(y);
        idxs.push(index);
        initial.push(InitialSample { index, y, mu_before: before.mu, sigma_before: before.sigma });
    }

    let mut rows = Vec::with_capacity(opts.budget - opts.initial_samples);
    for t in opts.initial_samples..opts.budget {
        let (best_pos, y_plus) = ys
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
        let posteriors = state.posterior_many(grid)?;
        let sel = select(&posteriors, y_plus)?;
        if opts.kappa.is_some_and(|k| sel.ei < k) {
            break;
        }
        let y_next = observe(sel.index);
        rows.push(TraceRow {
            t,
            index: sel.index,
            x_next: grid.row(sel.index).to_vec(),
            y_next,
            y_plus,
            mu_next: sel.posterior.mu,
            sigma_next: sel.posterior.sigma,
            ei_next: sel.ei,
            sigma_at_star: posteriors[sample.x_star_idx].sigma,
            r_t: y_plus - sample.f_star,
            r0_t: sample.f[idxs[best_pos]] - sample.f_star,
        });
        state = state.update(grid.row(sel.index), y_next)?;
        ys.push(y_next);
        idxs.push(sel.index);
    }

    Ok(Trace {
        seed,
        noise_sd: opts.noise_sd,
        f_star: sample.f_star,
        m_bound: sample.m_bound,
        initial,
        rows,
    })
}
