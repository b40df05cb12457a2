//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gpei::bounds::{self, RateKind};
use gpei::harness::campaign::CampaignReport;
use gpei::harness::figures::{self, FigureId};
use gpei::harness::lemmas::LemmaOutcome;
use gpei::harness::{run_campaign, verify_lemma, LemmaId, RawConfig, Theorem};
use gpei::stdnormal::{self, BarTauParams};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail = format!("{} [{:.2}s, limit {}s]", o.detail, took.as_secs_f64(), limit.as_secs());
    o.pass &= took <= limit;
    o
}

fn gpei(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gpei")).args(args).output().expect("binary runs")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn remark_constants() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let o = gpei(&["coeffs", "--delta", "0.1", "--out", tmp.path().to_str().unwrap()]);
    if o.status.code() != Some(0) {
        return outcome(false, "coeffs subcommand failed");
    }
    let csv = fs::read_to_string(tmp.path().join("coeffs.csv")).unwrap();
    let line = csv.lines().nth(2).unwrap();
    let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
    // delta, beta_42, c4_42, c5_42, beta_46, c1, c2, c4_46, c5_46
    let pairs = [
        ("beta_42", v[1], 8.19),
        ("C4_42", v[2], 4632.0),
        ("C5_42", v[3], 15103.0),
        ("beta_46", v[4], 9.17),
        ("C1", v[5], 345.0),
        ("C2", v[6], 141.0),
        ("C5_46", v[8], 1187.0),
    ];
    let worst = pairs.iter().map(|(n, g, w)| (n, rel(*g, *w))).max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let beta3 = format!("{:.3}", v[1]);
    outcome(
        worst.1 <= 0.02 && beta3 == "8.189",
        format!("beta_42={beta3}; worst relative error {:.4} ({})", worst.1, worst.0),
    )
}

fn figure_three_minimum() -> Outcome {
    let p = BarTauParams::new(1e-3, 2.0, 18.0).unwrap();
    let rho_bar = stdnormal::find_rho_bar(&p);
    let slice = figures::figure_tables(FigureId::F3BarTau).unwrap().pop().unwrap();
    let reference = stdnormal::tau(1e-3).unwrap();
    let above = slice.column("bar_tau").unwrap().iter().all(|&v| v > reference);
    let in_range = rho_bar.is_some_and(|r| (0.018..=0.028).contains(&r));
    outcome(in_range && above, format!("rho_bar={rho_bar:?}; slice above tau(1e-3) at all {} points: {above}", slice.rows.len()))
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn closed_form_suites() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    let cfg = RawConfig::default().resolve().unwrap();
    for id in [LemmaId::TailBound, LemmaId::TauVsPhi, LemmaId::EiMonotone] {
        check(&id.to_string(), verify_lemma(id, &cfg, None).unwrap().passes());
    }
    let tau = |z: f64| stdnormal::tau(z).unwrap();
    let zs: Vec<f64> = grid(-8.0, 8.0, 1601).collect();
    check("tau_positive", zs.iter().all(|&z| tau(z) > 0.0));
    check("tau_increasing", zs.windows(2).all(|w| tau(w[1]) > tau(w[0])));
    let h = 1e-5;
    check(
        "tau_derivative",
        grid(-5.0, 5.0, 201).all(|z| ((tau(z + h) - tau(z - h)) / (2.0 * h) - stdnormal::cdf(z).unwrap()).abs() < 1e-6),
    );
    check("tau_shift", zs.iter().all(|&z| (tau(z) - tau(-z) - z).abs() < 1e-12));
    let mut ei_ok = true;
    for a in grid(-3.0, 3.0, 121) {
        for b in grid(0.0, 1.0, 101) {
            ei_ok &= stdnormal::ei_ab(a, b).unwrap() >= a.max(0.0);
        }
    }
    check("ei_dominates_positive_part", ei_ok);
    let mut theta_ok = true;
    let mut stationary_ok = true;
    for z in grid(-5.0, 5.0, 41) {
        let p = BarTauParams::new(z, 2.0, 18.0).unwrap();
        let rhos: Vec<f64> = (1..200).map(|j| j as f64 / 200.0 * p.rho_max()).collect();
        let th: Vec<f64> = rhos.iter().map(|&r| stdnormal::theta(r, &p).unwrap()).collect();
        theta_ok &= th.windows(2).all(|w| w[1] < w[0]);
        if let Some(rb) = stdnormal::find_rho_bar(&p) {
            let d = 1e-4 * p.rho_max();
            let v = stdnormal::bar_tau(rb, &p).unwrap();
            stationary_ok &= stdnormal::theta(rb, &p).unwrap().abs() < 1e-9;
            if rb - d > 0.0 && rb + d < p.rho_max() {
                stationary_ok &= stdnormal::bar_tau(rb - d, &p).unwrap() >= v && stdnormal::bar_tau(rb + d, &p).unwrap() >= v;
            }
        }
    }
    check("theta_decreasing", theta_ok);
    check("bar_tau_stationarity", stationary_ok);
    let detail = if failures.is_empty() { "all suites pass".to_string() } else { format!("failed: {}", failures.join(", ")) };
    outcome(failures.is_empty(), detail)
}

fn monte_carlo_lemmas() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for delta in [0.05, 0.1] {
        let cfg = RawConfig { delta: Some(delta), ..Default::default() }.resolve().unwrap();
        for id in [LemmaId::Fmu, LemmaId::FmuT, LemmaId::IeiAdd, LemmaId::IeiRatio] {
            let r = verify_lemma(id, &cfg, None).unwrap();
            pass &= r.passes();
            if let LemmaOutcome::Coverage { coverage: c, .. } = &r.outcome {
                lines.push(format!("{id}@{delta}={}/{} (>= {:.4})", c.successes, c.n, c.threshold));
            }
        }
    }
    let r = verify_lemma(LemmaId::Icdf, &RawConfig::default().resolve().unwrap(), None).unwrap();
    pass &= r.passes();
    if let LemmaOutcome::Cdf { max_error, .. } = r.outcome {
        lines.push(format!("icdf max error {max_error:.5}"));
    }
    outcome(pass, lines.join("; "))
}

fn campaigns() -> (CampaignReport, CampaignReport, Duration) {
    let start = Instant::now();
    let noisy = run_campaign(&RawConfig::default().resolve().unwrap(), 0).unwrap();
    let noiseless = run_campaign(&RawConfig { noise_sd: Some(0.0), ..Default::default() }.resolve().unwrap(), 0).unwrap();
    (noisy, noiseless, start.elapsed())
}

fn coverage(noisy: &CampaignReport, noiseless: &CampaignReport, took: Duration) -> Outcome {
    let mut pass = took <= Duration::from_secs(600);
    let mut parts = Vec::new();
    for (label, rep) in [("noisy", noisy), ("noiseless", noiseless)] {
        for th in Theorem::ALL {
            let n = rep.coverage.iter().filter(|r| r.theorem == th).count();
            pass &= n > 0 && rep.coverage_passes(th);
            parts.push(format!("{label} {th}: {n} valid t, min frequency {:?}", rep.min_frequency(th)));
        }
        pass &= rep.comparisons > 0 && rep.thm46_smaller == rep.comparisons;
        parts.push(format!("{label} thm46<thm42 {}/{}", rep.thm46_smaller, rep.comparisons));
    }
    parts.push(format!("[{:.2}s, limit 600s]", took.as_secs_f64()));
    outcome(pass, parts.join("; "))
}

fn variance_sum(noisy: &CampaignReport) -> Outcome {
    let ok = noisy.variance_sum_checked == noisy.config.trials && noisy.variance_sum_holds == noisy.variance_sum_checked;
    outcome(ok, format!("{}/{} noisy traces", noisy.variance_sum_holds, noisy.variance_sum_checked))
}

fn rate_shape(noisy: &CampaignReport) -> Outcome {
    let exponent = bounds::rate_exponent(RateKind::Matern { nu: 2.5 }, 1).unwrap();
    let exponent_ok = exponent == 2.5 / (2.0 * 2.5 + 1.0);
    match noisy.rate_fit {
        Some(fit) => outcome(
            fit.passes() && exponent_ok,
            format!(
                "t in [{}, {}]: sigma-term slope {:.4}, SE envelope slope {:.4}, |diff| {:.4} (tolerance 0.15); matern-5/2 exponent {exponent:.6}",
                fit.t_first,
                fit.t_last,
                fit.term_slope,
                fit.envelope_slope,
                (fit.term_slope - fit.envelope_slope).abs()
            ),
        ),
        None => outcome(false, "no rate fit available"),
    }
}

fn rkhs() -> Outcome {
    let bs = [1.0, 2.0, 4.0, 8.0, 16.0];
    let mut ratio_ok = true;
    let mut inv = Vec::new();
    for b in bs {
        let r = bounds::rkhs_bounds(b, 100, 1.0, 0.1).unwrap();
        ratio_ok &= r.lemma_coefficient / r.improved_coefficient > r.c_r;
        inv.push(1.0 / r.c_r);
    }
    let decreasing = inv.windows(2).all(|w| w[1] < w[0]);
    outcome(ratio_ok && decreasing, format!("ratio inequality: {ratio_ok}; 1/c_r = {inv:?}"))
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn reproducibility() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [&["run"], &["verify", "all"], &["figures", "all"], &["coeffs", "--delta", "0.1"]];
    let mut bad = Vec::new();
    for (i, args) in cases.iter().enumerate() {
        let dirs = [tmp.path().join(format!("a{i}")), tmp.path().join(format!("b{i}"))];
        for (k, d) in dirs.iter().enumerate() {
            let mut a = args.to_vec();
            a.extend(["--seed", "7", "--out", d.to_str().unwrap(), "--workers", if k == 0 { "1" } else { "4" }]);
            gpei(&a);
        }
        let (x, y) = (read_dir(&dirs[0]), read_dir(&dirs[1]));
        if x.is_empty() || x != y {
            bad.push(args[0]);
        }
    }
    let detail = if bad.is_empty() { "run, verify, figures, coeffs byte-identical".to_string() } else { format!("differs: {bad:?}") };
    outcome(bad.is_empty(), detail)
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "remark constants", timed(Duration::from_secs(1), remark_constants)),
        (2, "figure-3 minimum", timed(Duration::from_secs(1), figure_three_minimum)),
        (3, "closed-form properties", timed(Duration::from_secs(10), closed_form_suites)),
        (4, "monte-carlo lemmas", timed(Duration::from_secs(300), monte_carlo_lemmas)),
    ];
    let (noisy, noiseless, took) = campaigns();
    results.push((5, "theorem coverage", coverage(&noisy, &noiseless, took)));
    results.push((6, "variance sum", variance_sum(&noisy)));
    results.push((7, "rate shape", timed(Duration::from_secs(60), || rate_shape(&noisy))));
    results.push((8, "rkhs coefficients", timed(Duration::from_secs(1), rkhs)));
    results.push((9, "reproducibility", reproducibility()));

    let mut failed = 0;
    for (n, name, o) in &results {
        println!("criterion {n} ({name}): {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
