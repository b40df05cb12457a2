//! Monte-Carlo coverage campaigns for the GP-prior regret bounds.

use std::path::Path;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Theorem};
use super::report::{f, Coverage, CsvWriter};
use crate::bounds::{self, BoundCheck, BoundConstants, RateKind};
use crate::eiopt::{self, LoopOptions, Trace};
use crate::gp::{PriorSampler, VarianceSumCheck};
use crate::rng;
use crate::Result;

/// Everything recorded for one trial.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub trace: Trace,
    /// Bound checks at every valid `t`, indexed like [`Theorem::ALL`].
    pub checks: [Vec<BoundCheck>; 2],
    pub variance_sum: Option<VarianceSumCheck>,
}

impl TrialResult {
    pub fn check(&self, theorem: Theorem, t: usize) -> Option<&BoundCheck> {
        self.checks[theorem_slot(theorem)].iter().find(|c| c.t == t)
    }
}

fn theorem_slot(theorem: Theorem) -> usize {
    match theorem {
        Theorem::Thm42 => 0,
        Theorem::Thm46 => 1,
    }
}

/// Coverage of one theorem at one `t` across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub theorem: Theorem,
    pub t: usize,
    pub coverage: Coverage,
    pub bound_mean: f64,
    pub bound_min: f64,
    pub bound_max: f64,
    pub r_t_mean: f64,
    pub r_t_max: f64,
    /// Mean window maximum of `σ_{t_k}(x_{t_k+1})`.
    pub sigma_win_mean: f64,
}

/// Log-log slope of the mean `σ_win` term of the `C₁, C₂` bound against the
/// SE rate envelope over the same `t` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub t_first: usize,
    pub t_last: usize,
    pub term_slope: f64,
    pub envelope_slope: f64,
}

impl RateFit {
    pub const TOLERANCE: f64 = 0.15;

    pub fn passes(&self) -> bool {
        (self.term_slope - self.envelope_slope).abs() <= Self::TOLERANCE
    }
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialResult>,
    pub coverage: Vec<CoverageRow>,
    /// Number of (trial, t) points where both bounds were evaluated, and the
    /// number where the `C₁, C₂` bound was strictly smaller.
    pub comparisons: usize,
    pub thm46_smaller: usize,
    pub variance_sum_holds: usize,
    pub variance_sum_checked: usize,
    pub rate_fit: Option<RateFit>,
}

/// One named pass/fail line of the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Informational checks are reported but do not affect the exit status.
    pub informational: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into(), informational: false }
    }
}

impl CampaignReport {
    pub fn coverage_passes(&self, theorem: Theorem) -> bool {
        self.coverage.iter().filter(|r| r.theorem == theorem).all(|r| r.coverage.passes())
    }

    pub fn min_frequency(&self, theorem: Theorem) -> Option<f64> {
        self.coverage
            .iter()
            .filter(|r| r.theorem == theorem)
            .map(|r| r.coverage.frequency)
            .min_by(f64::total_cmp)
    }

    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        for th in Theorem::ALL {
            let rows: Vec<&CoverageRow> = self.coverage.iter().filter(|r| r.theorem == th).collect();
            let worst = rows.iter().min_by(|a, b| a.coverage.frequency.total_cmp(&b.coverage.frequency));
            let detail = match worst {
                Some(w) => format!(
                    "{} valid t; min frequency {} at t={} (threshold {})",
                    rows.len(),
                    w.coverage.frequency,
                    w.t,
                    w.coverage.threshold
                ),
                None => "no valid t in range".to_string(),
            };
            out.push(Check::new(format!("coverage_{th}"), self.coverage_passes(th), detail));
        }
        out.push(Check::new(
            "thm46_below_thm42",
            self.thm46_smaller == self.comparisons,
            format!("{}/{} evaluation points", self.thm46_smaller, self.comparisons),
        ));
        if self.config.is_noisy() {
            out.push(Check::new(
                "variance_sum",
                self.variance_sum_holds == self.variance_sum_checked,
                format!("{}/{} traces", self.variance_sum_holds, self.variance_sum_checked),
            ));
        }
        // the envelope is asymptotic, so a short campaign may legitimately decay faster
        if let Some(fit) = self.rate_fit {
            out.push(Check {
                name: "rate_slope".into(),
                pass: fit.passes(),
                informational: true,
                detail: format!(
                    "t in [{}, {}]: sigma-term slope {} vs SE envelope slope {} (tolerance {})",
                    fit.t_first,
                    fit.t_last,
                    fit.term_slope,
                    fit.envelope_slope,
                    RateFit::TOLERANCE
                ),
            });
        }
        out
    }

    /// All gating checks pass.
    pub fn passes(&self) -> bool {
        self.checks().iter().all(|c| c.pass || c.informational)
    }
}

pub fn theorem_constants(theorem: Theorem, delta: f64, noisy: bool) -> Result<BoundConstants> {
    match theorem {
        Theorem::Thm42 => bounds::constants_thm42(delta, noisy),
        Theorem::Thm46 => bounds::constants_thm46(delta, noisy),
    }
}

fn run_trial(
    cfg: &ExperimentConfig,
    sampler: &PriorSampler,
    constants: &[BoundConstants; 2],
    trial: usize,
) -> Result<TrialResult> {
    let seed = rng::trial_seed(cfg.seed, trial as u64);
    let sample = sampler.sample(seed);
    let opts = LoopOptions {
        kernel: cfg.kernel,
        noise_sd: cfg.noise_sd,
        budget: cfg.budget,
        initial_samples: cfg.initial_samples,
        kappa: cfg.kappa,
    };
    let trace = eiopt::run(&opts, &sample, seed)?;
    let mut checks: [Vec<BoundCheck>; 2] = [Vec::new(), Vec::new()];
    for (slot, c) in constants.iter().enumerate() {
        for row in &trace.rows {
            if c.is_valid_t(row.t) {
                checks[slot].push(bounds::empirical_bound_check(&trace, c, trace.m_bound, cfg.noise_sd, row.t)?);
            }
        }
    }
    let variance_sum = trace.variance_sum_check();
    Ok(TrialResult { trial, seed, trace, checks, variance_sum })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn rate_fit(cfg: &ExperimentConfig, rows: &[CoverageRow], c46: &BoundConstants) -> Result<Option<RateFit>> {
    let coef = bounds::sigma_coefficient(c46);
    let mut term = Vec::new();
    let mut env = Vec::new();
    for r in rows.iter().filter(|r| r.theorem == Theorem::Thm46 && r.t >= 4) {
        let v = coef * r.sigma_win_mean;
        if v > 0.0 {
            let lt = (r.t as f64).ln();
            term.push((lt, v.ln()));
            env.push((lt, bounds::rate_envelope(RateKind::SquaredExponential, r.t, cfg.d, 1.0)?.ln()));
        }
    }
    if term.len() < 3 {
        return Ok(None);
    }
    let t_of = |p: &(f64, f64)| p.0.exp().round() as usize;
    Ok(Some(RateFit {
        t_first: t_of(&term[0]),
        t_last: t_of(&term[term.len() - 1]),
        term_slope: least_squares_slope(&term),
        envelope_slope: least_squares_slope(&env),
    }))
}

fn aggregate(theorem: Theorem, t: usize, checks: &[&BoundCheck], delta: f64) -> CoverageRow {
    let n = checks.len();
    let nf = n as f64;
    let holds = checks.iter().filter(|c| c.holds).count();
    let mean = |g: fn(&BoundCheck) -> f64| checks.iter().map(|c| g(c)).sum::<f64>() / nf;
    CoverageRow {
        theorem,
        t,
        coverage: Coverage::new(holds, n, delta),
        bound_mean: mean(|c| c.bound),
        bound_min: checks.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min),
        bound_max: checks.iter().map(|c| c.bound).fold(f64::NEG_INFINITY, f64::max),
        r_t_mean: mean(|c| c.r_t),
        r_t_max: checks.iter().map(|c| c.r_t).fold(f64::NEG_INFINITY, f64::max),
        sigma_win_mean: mean(|c| c.sigma_win_max),
    }
}

/// Runs every trial of the campaign on `workers` threads (0 = all cores).
pub fn run_campaign(cfg: &ExperimentConfig, workers: usize) -> Result<CampaignReport> {
    cfg.validate()?;
    let noisy = cfg.is_noisy();
    let constants = [
        theorem_constants(Theorem::Thm42, cfg.delta, noisy)?,
        theorem_constants(Theorem::Thm46, cfg.delta, noisy)?,
    ];
    let sampler = PriorSampler::new(&cfg.kernel, cfg.grid()?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::Error::Config(format!("cannot start worker pool: {e}")))?;
    let trials: Vec<TrialResult> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(cfg, &sampler, &constants, i))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut coverage = Vec::new();
    for th in Theorem::ALL {
        let slot = theorem_slot(th);
        let mut ts: Vec<usize> = trials.iter().flat_map(|r| r.checks[slot].iter().map(|c| c.t)).collect();
        ts.sort_unstable();
        ts.dedup();
        for t in ts {
            let at_t: Vec<&BoundCheck> = trials.iter().filter_map(|r| r.check(th, t)).collect();
            coverage.push(aggregate(th, t, &at_t, cfg.delta));
        }
    }

    let mut comparisons = 0;
    let mut thm46_smaller = 0;
    for r in &trials {
        for a in &r.checks[0] {
            if let Some(b) = r.check(Theorem::Thm46, a.t) {
                // identical window and inputs: compare the two formulas directly
                let x = bounds::bound(&constants[0], a.t, r.trace.m_bound, cfg.noise_sd, b.sigma_win_max.clamp(0.0, 1.0))?;
                comparisons += 1;
                if b.bound < x {
                    thm46_smaller += 1;
                }
            }
        }
    }

    let vs: Vec<&VarianceSumCheck> = trials.iter().filter_map(|r| r.variance_sum.as_ref()).collect();
    let rate_fit = rate_fit(cfg, &coverage, &constants[1])?;
    Ok(CampaignReport {
        config: *cfg,
        variance_sum_holds: vs.iter().filter(|v| v.holds).count(),
        variance_sum_checked: vs.len(),
        trials,
        coverage,
        comparisons,
        thm46_smaller,
        rate_fit,
    })
}

const TRACE_COLUMNS_TAIL: [&str; 10] = [
    "y_next",
    "y_plus",
    "mu_next",
    "sigma_next",
    "ei_next",
    "sigma_at_star",
    "r_t",
    "r0_t",
    "bound",
    "holds",
];

fn write_trace(path: &Path, cfg: &ExperimentConfig, r: &TrialResult) -> Result<()> {
    let mut header: Vec<String> = vec!["trial".into(), "t".into()];
    header.extend((0..cfg.d).map(|k| format!("x_next_{k}")));
    header.extend(TRACE_COLUMNS_TAIL.iter().map(|s| s.to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let meta = format!("{} trial={} trial_seed={} theorem={}", cfg.metadata(), r.trial, r.seed, cfg.theorem);
    let mut w = CsvWriter::create(path, &meta, &header)?;
    for row in &r.trace.rows {
        let mut fields = vec![f(r.trial), f(row.t)];
        fields.extend(row.x_next.iter().map(f));
        let check = r.check(cfg.theorem, row.t);
        fields.extend([
            f(row.y_next),
            f(row.y_plus),
            f(row.mu_next),
            f(row.sigma_next),
            f(row.ei_next),
            f(row.sigma_at_star),
            f(row.r_t),
            f(row.r0_t),
            check.map_or(String::new(), |c| f(c.bound)),
            check.map_or(String::new(), |c| f(c.holds)),
        ]);
        w.row(&fields)?;
    }
    w.finish()
}

/// Writes traces, `coverage.csv`, `variance_sum.csv`, `config.toml` and
/// `summary.txt` into `dir`.
pub fn write_campaign(dir: &Path, report: &CampaignReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let cfg = &report.config;
    for r in &report.trials {
        write_trace(&dir.join(format!("trace_trial_{:04}.csv", r.trial)), cfg, r)?;
    }

    let mut w = CsvWriter::create(
        &dir.join("coverage.csv"),
        &cfg.metadata(),
        &[
            "theorem",
            "t",
            "trials",
            "holds",
            "holds_frequency",
            "wilson_lower",
            "wilson_upper",
            "threshold",
            "pass",
            "bound_mean",
            "bound_min",
            "bound_max",
            "r_t_mean",
            "r_t_max",
            "sigma_win_mean",
        ],
    )?;
    for row in &report.coverage {
        let c = &row.coverage;
        w.row(&[
            f(row.theorem),
            f(row.t),
            f(c.n),
            f(c.successes),
            f(c.frequency),
            f(c.wilson_lower),
            f(c.wilson_upper),
            f(c.threshold),
            f(c.passes()),
            f(row.bound_mean),
            f(row.bound_min),
            f(row.bound_max),
            f(row.r_t_mean),
            f(row.r_t_max),
            f(row.sigma_win_mean),
        ])?;
    }
    w.finish()?;

    if cfg.is_noisy() {
        let mut w = CsvWriter::create(&dir.join("variance_sum.csv"), &cfg.metadata(), &["trial", "lhs", "rhs", "holds"])?;
        for r in &report.trials {
            if let Some(v) = &r.variance_sum {
                w.row(&[f(r.trial), f(v.lhs), f(v.rhs), f(v.holds)])?;
            }
        }
        w.finish()?;
    }

    std::fs::write(dir.join("config.toml"), cfg.to_toml())?;
    std::fs::write(dir.join("summary.txt"), summary_text(&cfg.metadata(), &cfg.to_toml(), &report.checks()))?;
    Ok(())
}

/// Summary file body: metadata, effective config, then one line per check.
pub fn summary_text(metadata: &str, config_toml: &str, checks: &[Check]) -> String {
    let mut s = format!("# {metadata}\n");
    for line in config_toml.lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    for c in checks {
        let verdict = match (c.pass, c.informational) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (true, true) => "INFO(pass)",
            (false, true) => "INFO(fail)",
        };
        s.push_str(&format!("{verdict} {}: {}\n", c.name, c.detail));
    }
    let all = checks.iter().all(|c| c.pass || c.informational);
    s.push_str(&format!("{}\n", if all { "ALL PASS" } else { "SOME CHECKS FAILED" }));
    s
}
