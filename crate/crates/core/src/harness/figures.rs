//! Figure data as CSV: normal tails, EI contours, τ̄/τ̃ landscapes and the
//! bound coefficients against δ.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::report::{f, CsvWriter};
use crate::bounds;
use crate::stdnormal::{bar_tau, cdf, ei_ab, find_rho_bar, tau, tilde_tau, BarTauParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    F1PhiTau,
    F2EiContour,
    F3BarTau,
    F4TildeTau,
    F5Coeffs,
}

/// Parameters of the τ̄ landscape.
pub const F3_W: f64 = 2.0;
pub const F3_C3: f64 = 18.0;
pub const F3_SLICE_Z: f64 = 1e-3;
/// Parameters of the τ̃ landscape.
pub const F4_W: f64 = 3.0;
pub const F4_C1: f64 = 741.0;
pub const F4_C3: f64 = 296.0;

impl FigureId {
    pub const ALL: [FigureId; 5] = [Self::F1PhiTau, Self::F2EiContour, Self::F3BarTau, Self::F4TildeTau, Self::F5Coeffs];

    fn stem(self) -> &'static str {
        match self {
            Self::F1PhiTau => "f1_phi_tau",
            Self::F2EiContour => "f2_ei_contour",
            Self::F3BarTau => "f3_bar_tau",
            Self::F4TildeTau => "f4_tilde_tau",
            Self::F5Coeffs => "f5_coeffs",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.stem())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let short = key.split('_').next().unwrap_or("");
        Self::ALL
            .into_iter()
            .find(|id| id.stem() == key || id.stem().starts_with(&format!("{short}_")))
            .ok_or_else(|| Error::Config(format!("unknown figure {s:?}, expected f1..f5")))
    }
}

/// An in-memory table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: &str, header: &[&'static str]) -> Self {
        Self { name: name.to_string(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

fn f1() -> Result<Table> {
    let mut t = Table::new("f1_phi_tau", &["z", "cdf_neg_z", "half_gauss", "tau_neg_z"]);
    for i in 0..=600 {
        let z = i as f64 * 0.01;
        t.rows.push(vec![z, cdf(-z)?, 0.5 * (-0.5 * z * z).exp(), tau(-z)?]);
    }
    Ok(t)
}

fn f2() -> Result<Table> {
    let mut t = Table::new("f2_ei_contour", &["a", "b", "ei"]);
    for i in 0..=120 {
        let a = -3.0 + 0.05 * i as f64;
        for j in 1..=100 {
            let b = 0.01 * j as f64;
            t.rows.push(vec![a, b, ei_ab(a, b)?]);
        }
    }
    Ok(t)
}

fn f3() -> Result<[Table; 2]> {
    let rho_max = F3_W / F3_C3;
    let mut grid = Table::new("f3_bar_tau", &["z", "rho", "log10_bar_tau"]);
    for i in 0..100 {
        let z = -5.0 + 0.05 * i as f64;
        let p = BarTauParams::new(z, F3_W, F3_C3)?;
        for j in 1..100 {
            let rho = j as f64 / 100.0 * rho_max;
            grid.rows.push(vec![z, rho, bar_tau(rho, &p)?.log10()]);
        }
    }
    let mut slice = Table::new("f3_bar_tau_slice", &["rho", "bar_tau", "tau_ref", "diff"]);
    let p = BarTauParams::new(F3_SLICE_Z, F3_W, F3_C3)?;
    let reference = tau(F3_SLICE_Z)?;
    for j in 1..1000 {
        let rho = j as f64 / 1000.0 * rho_max;
        let v = bar_tau(rho, &p)?;
        slice.rows.push(vec![rho, v, reference, v - reference]);
    }
    Ok([grid, slice])
}

fn f4() -> Result<[Table; 2]> {
    let rho_max = F4_W / F4_C3;
    let mut grid = Table::new("f4_tilde_tau", &["z", "rho", "log10_tilde_tau"]);
    for i in 0..=100 {
        let z = 0.05 * i as f64;
        for j in 1..100 {
            let rho = j as f64 / 100.0 * rho_max;
            grid.rows.push(vec![z, rho, tilde_tau(rho, z, F4_W, F4_C1, F4_C3)?.log10()]);
        }
    }
    let mut slice = Table::new("f4_tilde_tau_slice", &["rho", "tilde_tau"]);
    for j in 1..1000 {
        let rho = j as f64 / 1000.0 * rho_max;
        slice.rows.push(vec![rho, tilde_tau(rho, 0.0, F4_W, F4_C1, F4_C3)?]);
    }
    Ok([grid, slice])
}

fn f5() -> Result<Table> {
    let mut t = Table::new(
        "f5_coeffs",
        &["delta", "log10_c4_42", "log10_c5_42", "log10_c4_46", "log10_c5_46"],
    );
    for i in 0..=88 {
        let delta = (2 + i) as f64 / 100.0;
        let c = bounds::compare_coefficients(delta)?;
        t.rows.push(vec![delta, c.c4_42.log10(), c.c5_42.log10(), c.c4_46.log10(), c.c5_46.log10()]);
    }
    Ok(t)
}

/// Tables making up one figure.
pub fn figure_tables(fig: FigureId) -> Result<Vec<Table>> {
    Ok(match fig {
        FigureId::F1PhiTau => vec![f1()?],
        FigureId::F2EiContour => vec![f2()?],
        FigureId::F3BarTau => f3()?.into(),
        FigureId::F4TildeTau => f4()?.into(),
        FigureId::F5Coeffs => vec![f5()?],
    })
}

/// `ρ̄` for the τ̄ slice, the stationary point of τ̄ in ρ.
pub fn f3_rho_bar() -> Result<Option<f64>> {
    Ok(find_rho_bar(&BarTauParams::new(F3_SLICE_Z, F3_W, F3_C3)?))
}

/// Writes every table of `fig` into `dir` and returns the paths.
pub fn emit_figure_data(fig: FigureId, dir: &Path, metadata: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for t in figure_tables(fig)? {
        let path = dir.join(format!("{}.csv", t.name));
        let mut w = CsvWriter::create(&path, &format!("{metadata} figure={}", t.name), &t.header)?;
        for r in &t.rows {
            w.row(&r.iter().map(f).collect::<Vec<_>>())?;
        }
        w.finish()?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("f3".parse::<FigureId>().unwrap(), FigureId::F3BarTau);
        assert_eq!("F5_Coeffs".parse::<FigureId>().unwrap(), FigureId::F5Coeffs);
        assert_eq!("f1_phi_tau".parse::<FigureId>().unwrap(), FigureId::F1PhiTau);
        assert!("f9".parse::<FigureId>().is_err());
    }

    #[test]
    fn f1_tail_below_half_gauss() {
        let t = f1().unwrap();
        assert_eq!(t.rows.len(), 601);
        assert!(t.rows.iter().all(|r| r[1] <= r[2] && r[3] < r[1]));
    }

    #[test]
    fn f3_slice_minimum_and_reference() {
        let [grid, slice] = f3().unwrap();
        assert_eq!(grid.rows.len(), 100 * 99);
        assert!(grid.rows.iter().all(|r| r[0] < 0.0 && r[1] > 0.0 && r[1] < F3_W / F3_C3));
        let rho = slice.column("rho").unwrap();
        let v = slice.column("bar_tau").unwrap();
        let k = (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
        let step = F3_W / F3_C3 / 1000.0;
        let rho_bar = f3_rho_bar().unwrap().unwrap();
        assert!((rho[k] - rho_bar).abs() <= step, "{} vs {rho_bar}", rho[k]);
        // 0.0239 is a rounded value, so allow half a unit in its last place
        assert!((rho[k] - 0.0239).abs() <= step + 5e-5);
        assert!(slice.rows.iter().all(|r| r[3] > 0.0));
    }

    #[test]
    fn f4_increasing_in_z() {
        let [grid, _] = f4().unwrap();
        for j in 0..99 {
            let col: Vec<f64> = grid.rows.iter().skip(j).step_by(99).map(|r| r[2]).collect();
            assert!(col.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn f5_matches_comparison_at_one_tenth() {
        let t = f5().unwrap();
        let row = t.rows.iter().find(|r| r[0] == 0.1).unwrap();
        let c = bounds::compare_coefficients(0.1).unwrap();
        assert_eq!(row[1], c.c4_42.log10());
        assert_eq!(row[4], c.c5_46.log10());
        assert_eq!(*t.rows.last().unwrap().first().unwrap(), 0.9);
    }
}
