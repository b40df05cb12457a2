//! Monte-Carlo and grid-scan checks of the probabilistic and analytic lemmas
//! behind the regret bounds.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use super::config::ExperimentConfig;
use super::report::{f, Coverage, CsvWriter};
use crate::bounds::{self, C_ALPHA};
use crate::eiopt::{self, LoopOptions};
use crate::gp::{GpState, PriorSampler};
use crate::rng::{self, Stream};
use crate::stdnormal::{big_phi, ei_ab_unchecked, phi, tau_unchecked};
use crate::{Error, PointSet, Result};

/// Slack absorbing round-off when a posterior standard deviation is ~0.
const ROUNDOFF: f64 = 1e-9;

/// Default Monte-Carlo sizes.
pub const POINTWISE_DRAWS: usize = 2000;
pub const FULL_RUNS: usize = 500;
pub const FULL_RUN_BUDGET: usize = 30;
pub const CDF_DRAWS: usize = 100_000;
pub const CDF_TOLERANCE: f64 = 0.01;
const MIN_MC_TRIALS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaId {
    /// `|f(x) − μ_t(x)| ≤ √β σ_t(x)` at a fixed point.
    Fmu,
    /// The same along a whole GP-EI run with `β_t = 2 log(π²t²/(6δ))`.
    FmuT,
    /// `|I_t(x) − EI_t(x)| ≤ √β σ_t(x)`.
    IeiAdd,
    /// `τ(−√β)/τ(√β) · I_t(x) ≤ EI_t(x)`.
    IeiRatio,
    /// `P{I_t(x) ≤ a} = Φ(a/σ − z)`.
    Icdf,
    /// `Φ(−c) ≤ ½e^{−c²/2}` for `c ≥ 0`.
    TailBound,
    /// `Φ(−z) > τ(−z)` for `z ≥ 0`.
    TauVsPhi,
    /// EI(a, b) increasing in both arguments.
    EiMonotone,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        Self::Fmu,
        Self::FmuT,
        Self::IeiAdd,
        Self::IeiRatio,
        Self::Icdf,
        Self::TailBound,
        Self::TauVsPhi,
        Self::EiMonotone,
    ];

    pub fn is_monte_carlo(self) -> bool {
        matches!(self, Self::Fmu | Self::FmuT | Self::IeiAdd | Self::IeiRatio | Self::Icdf)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fmu => "fmu",
            Self::FmuT => "fmu_t",
            Self::IeiAdd => "iei_add",
            Self::IeiRatio => "iei_ratio",
            Self::Icdf => "icdf",
            Self::TailBound => "tail_bound",
            Self::TauVsPhi => "tau_vs_phi",
            Self::EiMonotone => "ei_monotone",
        })
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|l| l.to_string().replace('_', "") == key)
            .ok_or_else(|| Error::Config(format!("unknown lemma {s:?}")))
    }
}

/// Outcome of a lemma check.
#[derive(Debug, Clone, PartialEq)]
pub enum LemmaOutcome {
    /// Frequency of a `1 − δ` event.
    Coverage { delta: f64, beta: f64, coverage: Coverage },
    /// Largest CDF error over the thresholds.
    Cdf { draws: usize, thresholds: Vec<(f64, f64, f64)>, max_error: f64 },
    /// Grid scan; `min_margin > 0` means the inequality held everywhere.
    Scan { points: usize, min_margin: f64, at: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub outcome: LemmaOutcome,
}

impl LemmaReport {
    pub fn passes(&self) -> bool {
        match &self.outcome {
            LemmaOutcome::Coverage { coverage, .. } => coverage.passes(),
            LemmaOutcome::Cdf { max_error, .. } => *max_error <= CDF_TOLERANCE,
            LemmaOutcome::Scan { min_margin, .. } => *min_margin > 0.0,
        }
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.passes() { "PASS" } else { "FAIL" };
        let detail = match &self.outcome {
            LemmaOutcome::Coverage { delta, beta, coverage: c } => format!(
                "delta={delta} beta={beta} n={} frequency={} target={} threshold={} wilson99=[{}, {}]",
                c.n, c.frequency, c.target, c.threshold, c.wilson_lower, c.wilson_upper
            ),
            LemmaOutcome::Cdf { draws, max_error, .. } => {
                format!("draws={draws} max_abs_error={max_error} tolerance={CDF_TOLERANCE}")
            }
            LemmaOutcome::Scan { points, min_margin, at } => {
                format!("points={points} min_margin={min_margin} at={at}")
            }
        };
        format!("{verdict} {}: {detail}", self.lemma)
    }
}

/// Five design points and one query drawn uniformly in `[0, r]^d`.
fn fixed_design(cfg: &ExperimentConfig) -> Result<PointSet> {
    let mut g = rng::stream(cfg.seed, Stream::Design);
    let coords = (0..6 * cfg.d).map(|_| cfg.r * g.random::<f64>()).collect();
    PointSet::from_flat(cfg.d, coords)
}

/// One prior draw on the fixed design: `(f(x), y⁺, posterior at x)`.
struct PointwiseDraw {
    f_query: f64,
    y_plus: f64,
    mu: f64,
    sigma: f64,
}

fn pointwise_draws(cfg: &ExperimentConfig, n: usize) -> Result<Vec<PointwiseDraw>> {
    let pts = fixed_design(cfg)?;
    let design = pts.select(&[0, 1, 2, 3, 4]);
    let query = pts.row(5).to_vec();
    let sampler = PriorSampler::new(&cfg.kernel, pts)?;
    let noise_var = cfg.noise_sd * cfg.noise_sd;
    (0..n)
        .map(|i| {
            let seed = rng::trial_seed(cfg.seed, i as u64);
            let s = sampler.sample(seed);
            let mut noise = rng::stream(seed, Stream::Noise);
            let y: Vec<f64> = s.f[..5].iter().map(|v| v + cfg.noise_sd * rng::standard_normal(&mut noise)).collect();
            let y_plus = y.iter().copied().fold(f64::INFINITY, f64::min);
            let state = GpState::fit(cfg.kernel, design.clone(), y, noise_var)?;
            let p = state.posterior(&query)?;
            Ok(PointwiseDraw { f_query: s.f[5], y_plus, mu: p.mu, sigma: p.sigma })
        })
        .collect()
}

fn coverage_outcome(delta: f64, beta: f64, hits: usize, n: usize) -> LemmaOutcome {
    LemmaOutcome::Coverage { delta, beta, coverage: Coverage::new(hits, n, delta) }
}

/// Runs the check for `lemma`; `trials` overrides the default Monte-Carlo size.
pub fn verify_lemma(lemma: LemmaId, cfg: &ExperimentConfig, trials: Option<usize>) -> Result<LemmaReport> {
    if let Some(n) = trials {
        if lemma.is_monte_carlo() && n < MIN_MC_TRIALS {
            return Err(Error::Config(format!("Monte-Carlo lemmas need at least {MIN_MC_TRIALS} trials, got {n}")));
        }
    }
    let delta = cfg.delta;
    let outcome = match lemma {
        LemmaId::Fmu => {
            let n = trials.unwrap_or(POINTWISE_DRAWS);
            let beta = 2.0 * (1.0 / delta).ln();
            let hits = pointwise_draws(cfg, n)?
                .iter()
                .filter(|d| (d.f_query - d.mu).abs() <= beta.sqrt() * d.sigma + ROUNDOFF)
                .count();
            coverage_outcome(delta, beta, hits, n)
        }
        LemmaId::IeiAdd => {
            let n = trials.unwrap_or(POINTWISE_DRAWS);
            let beta = (2.0 * (C_ALPHA / delta).ln()).max(1.44);
            let hits = pointwise_draws(cfg, n)?
                .iter()
                .filter(|d| {
                    let i = eiopt::improvement(d.y_plus, d.f_query);
                    let ei = ei_ab_unchecked(d.y_plus - d.mu, d.sigma);
                    (i - ei).abs() <= beta.sqrt() * d.sigma + ROUNDOFF
                })
                .count();
            coverage_outcome(delta, beta, hits, n)
        }
        LemmaId::IeiRatio => {
            let n = trials.unwrap_or(POINTWISE_DRAWS);
            let beta = 2.0 * (1.0 / delta).ln();
            let ratio = 1.0 / bounds::c_tau(beta)?;
            let hits = pointwise_draws(cfg, n)?
                .iter()
                .filter(|d| {
                    let i = eiopt::improvement(d.y_plus, d.f_query);
                    ratio * i <= ei_ab_unchecked(d.y_plus - d.mu, d.sigma) + ROUNDOFF
                })
                .count();
            coverage_outcome(delta, beta, hits, n)
        }
        LemmaId::FmuT => fmu_t(cfg, trials.unwrap_or(FULL_RUNS))?,
        LemmaId::Icdf => icdf(cfg.seed, trials.unwrap_or(CDF_DRAWS)),
        LemmaId::TailBound => scan((1..=1000).map(|i| i as f64 * 0.01), |c| 0.5 * (-0.5 * c * c).exp() - big_phi(-c)),
        LemmaId::TauVsPhi => scan((0..=800).map(|i| i as f64 * 0.01), |z| big_phi(-z) - tau_unchecked(-z)),
        LemmaId::EiMonotone => ei_monotone(),
    };
    Ok(LemmaReport { lemma, outcome })
}

fn fmu_t(cfg: &ExperimentConfig, n: usize) -> Result<LemmaOutcome> {
    let grid = cfg.grid()?;
    let budget = FULL_RUN_BUDGET.min(grid.len());
    let sampler = PriorSampler::new(&cfg.kernel, grid)?;
    let opts = LoopOptions {
        kernel: cfg.kernel,
        noise_sd: cfg.noise_sd,
        budget,
        initial_samples: cfg.initial_samples.min(budget),
        kappa: None,
    };
    let beta: Vec<f64> = (1..=budget).map(|t| bounds::beta_t_seq(t, cfg.delta)).collect::<Result<_>>()?;
    let mut hits = 0;
    for i in 0..n {
        let seed = rng::trial_seed(cfg.seed, i as u64);
        let sample = sampler.sample(seed);
        let trace = eiopt::run(&opts, &sample, seed)?;
        // observation number k (1-based) uses the posterior after k − 1 points
        let all = trace
            .initial
            .iter()
            .map(|s| (s.index, s.mu_before, s.sigma_before))
            .chain(trace.rows.iter().map(|r| (r.index, r.mu_next, r.sigma_next)))
            .enumerate()
            .all(|(k, (idx, mu, sigma))| (sample.f[idx] - mu).abs() <= beta[k].sqrt() * sigma + ROUNDOFF);
        hits += usize::from(all);
    }
    Ok(coverage_outcome(cfg.delta, beta[budget - 1], hits, n))
}

fn icdf(seed: u64, draws: usize) -> LemmaOutcome {
    let (mu, sigma, y_plus) = (0.3, 0.8, 0.1);
    let z = (y_plus - mu) / sigma;
    let mut g = rng::stream(seed, Stream::Aux);
    let imp: Vec<f64> = (0..draws)
        .map(|_| eiopt::improvement(y_plus, mu + sigma * rng::standard_normal(&mut g)))
        .collect();
    let thresholds: Vec<(f64, f64, f64)> = [0.0, 0.5, 1.0, 2.0]
        .iter()
        .map(|m| {
            let a = m * sigma;
            let freq = imp.iter().filter(|&&i| i <= a).count() as f64 / draws as f64;
            (a, freq, big_phi(a / sigma - z))
        })
        .collect();
    let max_error = thresholds.iter().map(|(_, e, t)| (e - t).abs()).fold(0.0, f64::max);
    LemmaOutcome::Cdf { draws, thresholds, max_error }
}

fn scan(xs: impl Iterator<Item = f64>, margin: impl Fn(f64) -> f64) -> LemmaOutcome {
    let (mut points, mut min_margin, mut at) = (0, f64::INFINITY, f64::NAN);
    for x in xs {
        points += 1;
        let m = margin(x);
        if m < min_margin {
            min_margin = m;
            at = x;
        }
    }
    LemmaOutcome::Scan { points, min_margin, at }
}

/// Checks that EI(a, b) increases along both axes of the a ∈ [−3, 3],
/// b ∈ (0, 1] grid. Margins are relative to the derivative bound so that
/// deep-tail steps, where EI underflows, do not count as violations.
fn ei_monotone() -> LemmaOutcome {
    let a_axis: Vec<f64> = (0..=120).map(|i| -3.0 + 0.05 * i as f64).collect();
    let b_axis: Vec<f64> = (1..=100).map(|j| 0.01 * j as f64).collect();
    let (mut points, mut min_margin, mut at) = (0, f64::INFINITY, f64::NAN);
    let mut visit = |lo: f64, hi: f64, slope: f64, step: f64, where_: f64| {
        points += 1;
        // increments smaller than what the derivative can resolve are skipped
        if slope * step > 1e-12 {
            let m = (hi - lo) / (slope * step);
            if m < min_margin {
                min_margin = m;
                at = where_;
            }
        }
    };
    for &b in &b_axis {
        for w in a_axis.windows(2) {
            let lo = ei_ab_unchecked(w[0], b);
            let hi = ei_ab_unchecked(w[1], b);
            visit(lo, hi, big_phi(w[0] / b), 0.05, w[0]);
        }
    }
    for &a in &a_axis {
        for w in b_axis.windows(2) {
            let lo = ei_ab_unchecked(a, w[0]);
            let hi = ei_ab_unchecked(a, w[1]);
            visit(lo, hi, phi(a / w[0]), 0.01, a);
        }
    }
    LemmaOutcome::Scan { points, min_margin, at }
}

/// Writes `verify_<lemma>.csv` into `dir`.
pub fn write_lemma(dir: &Path, cfg: &ExperimentConfig, report: &LemmaReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("verify_{}.csv", report.lemma));
    let meta = format!("{} lemma={}", cfg.metadata(), report.lemma);
    match &report.outcome {
        LemmaOutcome::Coverage { delta, beta, coverage: c } => {
            let mut w = CsvWriter::create(
                &path,
                &meta,
                &["lemma", "delta", "beta", "n", "successes", "frequency", "target", "threshold", "wilson_lower", "wilson_upper", "pass"],
            )?;
            w.row(&[
                f(report.lemma),
                f(delta),
                f(beta),
                f(c.n),
                f(c.successes),
                f(c.frequency),
                f(c.target),
                f(c.threshold),
                f(c.wilson_lower),
                f(c.wilson_upper),
                f(report.passes()),
            ])?;
            w.finish()
        }
        LemmaOutcome::Cdf { draws, thresholds, .. } => {
            let mut w = CsvWriter::create(&path, &meta, &["lemma", "draws", "a", "empirical", "exact", "abs_error", "pass"])?;
            for (a, e, t) in thresholds {
                w.row(&[f(report.lemma), f(draws), f(a), f(e), f(t), f((e - t).abs()), f((e - t).abs() <= CDF_TOLERANCE)])?;
            }
            w.finish()
        }
        LemmaOutcome::Scan { points, min_margin, at } => {
            let mut w = CsvWriter::create(&path, &meta, &["lemma", "points", "min_margin", "at", "pass"])?;
            w.row(&[f(report.lemma), f(points), f(min_margin), f(at), f(report.passes())])?;
            w.finish()
        }
    }
}
