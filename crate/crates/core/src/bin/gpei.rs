use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gpei::bounds;
use gpei::harness::campaign::{summary_text, Check};
use gpei::harness::figures::{self, figure_tables};
use gpei::harness::report::{f, CsvWriter};
use gpei::harness::{self, ExperimentConfig, FigureId, LemmaId, RawConfig};
use gpei::Error;

/// GP-EI experiments: coverage campaigns, lemma checks, figure data and
/// bound constants.
#[derive(Parser)]
#[command(name = "gpei", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML file with experiment settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Observation noise standard deviation
    #[arg(long, global = true)]
    noise_sd: Option<f64>,
    /// Confidence parameter δ
    #[arg(long, global = true)]
    delta: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a bound-coverage campaign
    Run,
    /// Check one lemma (or `all`)
    Verify { lemma: String },
    /// Write figure data (f1..f5 or `all`)
    Figures { figure: String },
    /// Print the bound coefficients for a confidence level
    Coeffs,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load_config(g: &Global) -> Result<(ExperimentConfig, RawConfig), Failure> {
    let file = match &g.config {
        Some(p) => RawConfig::from_file(p)?,
        None => RawConfig::default(),
    };
    let cli = RawConfig { seed: g.seed, trials: g.trials, noise_sd: g.noise_sd, delta: g.delta, ..Default::default() };
    let raw = file.merge(cli);
    Ok((raw.resolve()?, raw))
}

fn finish(out: &Path, cfg: &ExperimentConfig, checks: &[Check]) -> Result<bool, Failure> {
    std::fs::create_dir_all(out).map_err(Error::from)?;
    let text = summary_text(&cfg.metadata(), &cfg.to_toml(), checks);
    std::fs::write(out.join("summary.txt"), &text).map_err(Error::from)?;
    print!("{text}");
    Ok(checks.iter().all(|c| c.pass || c.informational))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Run => {
            let (cfg, _) = load_config(g)?;
            let report = harness::run_campaign(&cfg, g.workers)?;
            harness::write_campaign(&g.out, &report)?;
            finish(&g.out, &cfg, &report.checks())
        }
        Command::Verify { lemma } => {
            let (cfg, raw) = load_config(g)?;
            let ids: Vec<LemmaId> = if lemma.eq_ignore_ascii_case("all") {
                LemmaId::ALL.to_vec()
            } else {
                vec![lemma.parse()?]
            };
            let mut checks = Vec::new();
            for id in ids {
                let trials = raw.trials.filter(|_| id.is_monte_carlo());
                let rep = harness::verify_lemma(id, &cfg, trials)?;
                harness::write_lemma(&g.out, &cfg, &rep)?;
                let line = rep.summary_line();
                let detail = line.split_once(": ").map_or(String::new(), |(_, d)| d.to_string());
                checks.push(Check::new(id.to_string(), rep.passes(), detail));
            }
            finish(&g.out, &cfg, &checks)
        }
        Command::Figures { figure } => {
            let (cfg, _) = load_config(g)?;
            let ids: Vec<FigureId> = if figure.eq_ignore_ascii_case("all") {
                FigureId::ALL.to_vec()
            } else {
                vec![figure.parse()?]
            };
            let mut checks = Vec::new();
            for id in ids {
                let paths = harness::emit_figure_data(id, &g.out, &cfg.metadata())?;
                let names: Vec<String> =
                    paths.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect();
                checks.push(Check::new(id.to_string(), true, format!("wrote {}", names.join(", "))));
                if id == FigureId::F3BarTau {
                    checks.push(f3_check()?);
                }
            }
            finish(&g.out, &cfg, &checks)
        }
        Command::Coeffs => {
            let (cfg, _) = load_config(g)?;
            let c = bounds::compare_coefficients(cfg.delta)?;
            std::fs::create_dir_all(&g.out).map_err(Error::from)?;
            let mut w = CsvWriter::create(
                &g.out.join("coeffs.csv"),
                &cfg.metadata(),
                &["delta", "beta_42", "c4_42", "c5_42", "beta_46", "c1", "c2", "c4_46", "c5_46"],
            )?;
            w.row(&[
                f(cfg.delta),
                f(c.beta_42),
                f(c.c4_42),
                f(c.c5_42),
                f(c.beta_46),
                f(c.c1),
                f(c.c2),
                f(c.c4_46),
                f(c.c5_46),
            ])?;
            w.finish()?;
            let detail = format!(
                "beta_42={:.3} C4_42={:.3} C5_42={:.3} beta_46={:.3} C1={:.3} C2={:.3} C4_46={:.3} C5_46={:.3}",
                c.beta_42, c.c4_42, c.c5_42, c.beta_46, c.c1, c.c2, c.c4_46, c.c5_46
            );
            let checks = [Check::new("coefficient_ordering", c.c4_46 < c.c4_42 && c.c5_46 < c.c5_42, detail)];
            finish(&g.out, &cfg, &checks)
        }
    }
}

fn f3_check() -> Result<Check, Failure> {
    let rho_bar = figures::f3_rho_bar()?;
    let slice = figure_tables(FigureId::F3BarTau)?.pop().expect("slice table");
    let above = slice.column("diff").unwrap_or_default().iter().all(|&d| d > 0.0);
    let pass = above && rho_bar.is_some_and(|r| (0.018..=0.028).contains(&r));
    Ok(Check::new("f3_minimum", pass, format!("rho_bar={rho_bar:?}; slice above tau reference: {above}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
