//! Gaussian-process prior sampling and posterior inference.
//!
//! Posterior mean and variance after `t` observations:
//!
//! ```text
//! μ_t(x)  = k_t(x)ᵀ (K_t + σ²I)⁻¹ y
//! σ²_t(x) = k(x, x) − k_t(x)ᵀ (K_t + σ²I)⁻¹ k_t(x)
//! ```
//!
//! Factorizations add a small jitter to the diagonal, starting at
//! [`JITTER_START`] and escalating tenfold up to [`JITTER_MAX`].

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::kernel::KernelSpec;
use crate::rng::{self, Stream};
use crate::{Error, PointSet, Result};

pub const JITTER_START: f64 = 1e-10;
pub const JITTER_MAX: f64 = 1e-6;

/// Posterior mean and standard deviation at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub mu: f64,
    pub sigma: f64,
}

/// Lower Cholesky factor of `a + jitter·I`, escalating the jitter on failure.
fn jittered_cholesky(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let n = a.nrows();
    let mut jitter = JITTER_START;
    loop {
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] += jitter;
        }
        if let Some(ch) = Cholesky::<f64, Dyn>::new(m) {
            return Ok((ch.unpack(), jitter));
        }
        if jitter >= JITTER_MAX {
            let min_diag = (0..n).map(|i| a[(i, i)]).fold(f64::INFINITY, f64::min);
            return Err(Error::Factorization { n, jitter, min_diag });
        }
        jitter *= 10.0;
    }
}

/// A fitted GP posterior. Immutable; [`GpState::update`] returns a new state.
#[derive(Debug, Clone)]
pub struct GpState {
    kernel: KernelSpec,
    x: PointSet,
    y: Vec<f64>,
    noise_var: f64,
    jitter: f64,
    chol: DMatrix<f64>,
    alpha: DVector<f64>,
}

impl GpState {
    /// Fits the posterior to observations `y` at locations `x`.
    pub fn fit(kernel: KernelSpec, x: PointSet, y: Vec<f64>, noise_var: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
        }
        if !(noise_var.is_finite() && noise_var >= 0.0) {
            return Err(Error::domain(format!("noise variance must be >= 0, got {noise_var}")));
        }
        if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("observations must be finite, got {bad}")));
        }
        let mut a = kernel.gram(&x);
        for i in 0..a.nrows() {
            a[(i, i)] += noise_var;
        }
        let (chol, jitter) = if x.is_empty() {
            (DMatrix::zeros(0, 0), JITTER_START)
        } else {
            jittered_cholesky(&a)?
        };
        let alpha = solve_spd(&chol, &DVector::from_column_slice(&y));
        Ok(Self { kernel, x, y, noise_var, jitter, chol, alpha })
    }

    /// Prior state with no observations.
    pub fn prior(kernel: KernelSpec, dim: usize, noise_var: f64) -> Result<Self> {
        Self::fit(kernel, PointSet::empty(dim), Vec::new(), noise_var)
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn inputs(&self) -> &PointSet {
        &self.x
    }

    pub fn observations(&self) -> &[f64] {
        &self.y
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    /// Diagonal jitter actually used by the factorization.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Number of observations `t`.
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Lower-triangular factor `L` with `L·Lᵀ = K_t + (σ² + jitter)·I`.
    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.chol
    }

    pub fn posterior(&self, x: &[f64]) -> Result<Posterior> {
        self.x.check_dim(x)?;
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("query must be finite, got {bad}")));
        }
        if self.is_empty() {
            return Ok(Posterior { mu: 0.0, sigma: 1.0 });
        }
        let k = self.kernel.cross(&self.x, x)?;
        let mu = k.dot(&self.alpha);
        let v = self.chol.solve_lower_triangular(&k).expect("factor has a positive diagonal");
        Ok(Posterior { mu, sigma: sigma_from_var(1.0 - v.norm_squared()) })
    }

    /// Posterior at every row of `pts`, computed with one blocked solve.
    pub fn posterior_many(&self, pts: &PointSet) -> Result<Vec<Posterior>> {
        if pts.dim() != self.x.dim() {
            return Err(Error::DimensionMismatch { expected: self.x.dim(), got: pts.dim() });
        }
        if self.is_empty() {
            return Ok(vec![Posterior { mu: 0.0, sigma: 1.0 }; pts.len()]);
        }
        let t = self.len();
        let mut kx = DMatrix::zeros(t, pts.len());
        for (j, q) in pts.rows().enumerate() {
            for (i, xi) in self.x.rows().enumerate() {
                kx[(i, j)] = self.kernel.eval_unchecked(xi, q);
            }
        }
        let mu = kx.tr_mul(&self.alpha);
        let v = self.chol.solve_lower_triangular(&kx).expect("factor has a positive diagonal");
        Ok((0..pts.len())
            .map(|j| Posterior { mu: mu[j], sigma: sigma_from_var(1.0 - v.column(j).norm_squared()) })
            .collect())
    }

    /// Adds one observation.
    ///
    /// Extends the Cholesky factor by one row when the new pivot stays
    /// positive; otherwise refits from scratch, which is the reference
    /// semantics.
    pub fn update(&self, x_new: &[f64], y_new: f64) -> Result<Self> {
        self.x.check_dim(x_new)?;
        if !y_new.is_finite() {
            return Err(Error::domain(format!("observation must be finite, got {y_new}")));
        }
        let mut x = self.x.clone();
        x.push(x_new)?;
        let mut y = self.y.clone();
        y.push(y_new);
        if self.is_empty() {
            return Self::fit(self.kernel, x, y, self.noise_var);
        }

        let t = self.len();
        let k = self.kernel.cross(&self.x, x_new)?;
        let l = self.chol.solve_lower_triangular(&k).expect("factor has a positive diagonal");
        let pivot = 1.0 + self.noise_var + self.jitter - l.norm_squared();
        if pivot.is_nan() || pivot <= 0.5 * self.jitter {
            return Self::fit(self.kernel, x, y, self.noise_var);
        }
        let mut chol = self.chol.clone().resize(t + 1, t + 1, 0.0);
        for j in 0..t {
            chol[(t, j)] = l[j];
        }
        chol[(t, t)] = pivot.sqrt();
        let alpha = solve_spd(&chol, &DVector::from_column_slice(&y));
        Ok(Self { kernel: self.kernel, x, y, noise_var: self.noise_var, jitter: self.jitter, chol, alpha })
    }
}

fn solve_spd(chol: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if b.is_empty() {
        return DVector::zeros(0);
    }
    let w = chol.solve_lower_triangular(b).expect("factor has a positive diagonal");
    chol.tr_solve_lower_triangular(&w).expect("factor has a positive diagonal")
}

#[inline]
fn sigma_from_var(var: f64) -> f64 {
    var.max(0.0).sqrt().min(1.0)
}

/// A latent function drawn from the GP prior on a finite grid.
#[derive(Debug, Clone)]
pub struct PriorSample {
    pub grid: PointSet,
    pub f: Vec<f64>,
    /// Minimum of `f` over the grid.
    pub f_star: f64,
    /// Lowest grid index attaining `f_star`.
    pub x_star_idx: usize,
    /// `max |f|` over the grid.
    pub m_bound: f64,
}

impl PriorSample {
    fn from_values(grid: PointSet, f: Vec<f64>) -> Self {
        let (mut x_star_idx, mut f_star) = (0, f[0]);
        for (i, &v) in f.iter().enumerate() {
            if v < f_star {
                f_star = v;
                x_star_idx = i;
            }
        }
        let m_bound = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Self { grid, f, f_star, x_star_idx, m_bound }
    }

    pub fn x_star(&self) -> &[f64] {
        self.grid.row(self.x_star_idx)
    }
}

/// Draws prior samples on a fixed grid, factorizing the grid Gram matrix once.
#[derive(Debug, Clone)]
pub struct PriorSampler {
    grid: PointSet,
    chol: DMatrix<f64>,
    jitter: f64,
}

impl PriorSampler {
    pub fn new(kernel: &KernelSpec, grid: PointSet) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::domain("prior grid must contain at least one point"));
        }
        let (chol, jitter) = jittered_cholesky(&kernel.gram(&grid))?;
        Ok(Self { grid, chol, jitter })
    }

    pub fn grid(&self) -> &PointSet {
        &self.grid
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// `f = L·z` with `z` i.i.d. standard normal from the prior stream of `seed`.
    pub fn sample(&self, seed: u64) -> PriorSample {
        let mut rng = rng::stream(seed, Stream::Prior);
        let z = DVector::from_iterator(self.grid.len(), (0..self.grid.len()).map(|_| rng::standard_normal(&mut rng)));
        let f = &self.chol * z;
        PriorSample::from_values(self.grid.clone(), f.as_slice().to_vec())
    }
}

/// One-shot prior draw; see [`PriorSampler`] for repeated draws on one grid.
pub fn sample_prior(kernel: &KernelSpec, grid: PointSet, seed: u64) -> Result<PriorSample> {
    Ok(PriorSampler::new(kernel, grid)?.sample(seed))
}

fn check_sigmas(sigma_at_next: &[f64], noise_var: f64) -> Result<()> {
    if !(noise_var.is_finite() && noise_var > 0.0) {
        return Err(Error::domain(format!("information gain needs noise variance > 0, got {noise_var}")));
    }
    if let Some(bad) = sigma_at_next.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::domain(format!("posterior standard deviations must lie in [0, 1], got {bad}")));
    }
    Ok(())
}

/// Information gain `½ Σ log(1 + σ⁻² σ²_{t−1}(x_t))` of a sampled sequence,
/// given the posterior standard deviation at each point before it was observed.
pub fn info_gain(sigma_at_next: &[f64], noise_var: f64) -> Result<f64> {
    check_sigmas(sigma_at_next, noise_var)?;
    Ok(0.5 * sigma_at_next.iter().map(|s| (s * s / noise_var).ln_1p()).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceSumCheck {
    /// `Σ σ²_{i−1}(x_i)`.
    pub lhs: f64,
    /// `C_γ · info_gain` with `C_γ = 2 / log(1 + σ⁻²)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the posterior-variance sum with `C_γ` times the empirical
/// information gain. Since the empirical gain never exceeds the maximum
/// information gain, `lhs ≤ rhs` must hold on every sequence.
pub fn variance_sum_check(sigma_at_next: &[f64], noise_var: f64) -> Result<VarianceSumCheck> {
    let gain = info_gain(sigma_at_next, noise_var)?;
    let c_gamma = 2.0 / (1.0 / noise_var).ln_1p();
    let lhs: f64 = sigma_at_next.iter().map(|s| s * s).sum();
    let rhs = c_gamma * gain;
    Ok(VarianceSumCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelFamily;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn se(l: f64) -> KernelSpec {
        KernelSpec::squared_exponential(l).unwrap()
    }

    /// Posterior by explicit inversion of K + σ²I (Gauss–Jordan), no Cholesky.
    #[allow(clippy::needless_range_loop)]
    fn brute_force_posterior(k: &KernelSpec, x: &PointSet, y: &[f64], noise: f64, q: &[f64]) -> (f64, f64) {
        let t = x.len();
        let mut a = vec![vec![0.0; 2 * t]; t];
        for i in 0..t {
            for j in 0..t {
                a[i][j] = k.eval(x.row(i), x.row(j)).unwrap() + if i == j { noise } else { 0.0 };
            }
            a[i][t + i] = 1.0;
        }
        for c in 0..t {
            let p = (c..t).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            a.swap(c, p);
            let piv = a[c][c];
            for v in a[c].iter_mut() {
                *v /= piv;
            }
            for r in 0..t {
                if r != c {
                    let f = a[r][c];
                    let row_c = a[c].clone();
                    for (v, w) in a[r].iter_mut().zip(row_c) {
                        *v -= f * w;
                    }
                }
            }
        }
        let kq: Vec<f64> = (0..t).map(|i| k.eval(x.row(i), q).unwrap()).collect();
        let mut mu = 0.0;
        let mut quad = 0.0;
        for i in 0..t {
            for j in 0..t {
                let inv = a[i][t + j];
                mu += kq[i] * inv * y[j];
                quad += kq[i] * inv * kq[j];
            }
        }
        (mu, 1.0 - quad)
    }

    #[test]
    fn empty_state_is_the_prior() {
        let s = GpState::prior(se(0.3), 2, 0.0).unwrap();
        let p = s.posterior(&[0.1, 0.9]).unwrap();
        assert_eq!((p.mu, p.sigma), (0.0, 1.0));
    }

    #[test]
    fn single_noiseless_observation_is_interpolated() {
        let x = PointSet::from_rows(&[vec![0.4]]).unwrap();
        let s = GpState::fit(se(0.2), x, vec![1.7], 0.0).unwrap();
        let p = s.posterior(&[0.4]).unwrap();
        assert!((p.mu - 1.7).abs() < 1e-8);
        assert!(p.sigma * p.sigma < 1e-8);
    }

    #[test]
    fn single_noisy_observation_halves() {
        let x = PointSet::from_rows(&[vec![0.4]]).unwrap();
        let s = GpState::fit(se(0.2), x, vec![1.7], 1.0).unwrap();
        let p = s.posterior(&[0.4]).unwrap();
        assert!((p.mu - 0.85).abs() < 1e-9);
        assert!((p.sigma * p.sigma - 0.5).abs() < 1e-9);
    }

    #[test]
    fn cholesky_reconstructs_jittered_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = PointSet::from_flat(2, (0..40).map(|_| rng.random::<f64>()).collect()).unwrap();
        let y: Vec<f64> = (0..20).map(|_| rng.random::<f64>()).collect();
        let s = GpState::fit(se(0.5), x.clone(), y, 0.01).unwrap();
        let l = s.cholesky_factor();
        let mut target = se(0.5).gram(&x);
        for i in 0..20 {
            target[(i, i)] += 0.01 + s.jitter();
        }
        let err = (l * l.transpose() - &target).norm() / target.norm();
        assert!(err < 1e-8);
    }

    #[test]
    fn matches_brute_force_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for t in 1..=3 {
            for noise in [0.0, 0.01, 0.5] {
                let x = PointSet::from_flat(2, (0..2 * t).map(|_| rng.random::<f64>()).collect()).unwrap();
                let y: Vec<f64> = (0..t).map(|_| rng.random::<f64>() - 0.5).collect();
                let k = KernelSpec::new(KernelFamily::Matern52, 0.6).unwrap();
                let s = GpState::fit(k, x.clone(), y.clone(), noise).unwrap();
                let q = [rng.random::<f64>(), rng.random::<f64>()];
                // the brute force inverts K + (σ² + jitter)I to compare like with like
                let (mu, var) = brute_force_posterior(&k, &x, &y, noise + s.jitter(), &q);
                let p = s.posterior(&q).unwrap();
                assert!((p.mu - mu).abs() < 1e-10, "t={t} noise={noise}");
                assert!((p.sigma * p.sigma - var.max(0.0)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn noiseless_interpolation_at_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = PointSet::from_flat(1, (0..8).map(|_| rng.random::<f64>()).collect()).unwrap();
        let y: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
        let s = GpState::fit(se(0.1), x.clone(), y.clone(), 0.0).unwrap();
        for (i, row) in x.rows().enumerate() {
            let p = s.posterior(row).unwrap();
            assert!((p.mu - y[i]).abs() < 1e-6);
            assert!(p.sigma <= 1e-4);
        }
    }

    #[test]
    fn far_query_reverts_to_prior() {
        let x = PointSet::from_rows(&[vec![0.0], vec![0.1]]).unwrap();
        let s = GpState::fit(se(0.05), x, vec![2.0, -1.0], 0.0).unwrap();
        let p = s.posterior(&[10.0]).unwrap();
        assert!(p.mu.abs() < 1e-12 && (p.sigma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn update_matches_refit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = se(0.3);
        for noise in [0.0, 0.0025] {
            let x = PointSet::from_flat(1, (0..6).map(|_| rng.random::<f64>()).collect()).unwrap();
            let y: Vec<f64> = (0..6).map(|_| rng.random::<f64>()).collect();
            let s = GpState::fit(k, x.clone(), y.clone(), noise).unwrap();
            let xn = [rng.random::<f64>()];
            let up = s.update(&xn, 0.3).unwrap();
            let mut x2 = x.clone();
            x2.push(&xn).unwrap();
            let mut y2 = y.clone();
            y2.push(0.3);
            let refit = GpState::fit(k, x2, y2, noise).unwrap();
            for i in 0..5 {
                let q = [i as f64 / 4.0];
                let (a, b) = (up.posterior(&q).unwrap(), refit.posterior(&q).unwrap());
                assert!((a.mu - b.mu).abs() < 1e-8 && (a.sigma - b.sigma).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn update_noiseless_interpolates_new_point() {
        let x = PointSet::from_rows(&[vec![0.2], vec![0.7]]).unwrap();
        let s = GpState::fit(se(0.2), x, vec![0.1, 0.5], 0.0).unwrap();
        let up = s.update(&[0.45], -0.8).unwrap();
        let p = up.posterior(&[0.45]).unwrap();
        assert!((p.mu + 0.8).abs() < 1e-6 && p.sigma < 1e-4);
    }

    #[test]
    fn duplicate_noisy_update_shrinks_variance() {
        let x = PointSet::from_rows(&[vec![0.5]]).unwrap();
        let s = GpState::fit(se(0.2), x, vec![0.3], 0.04).unwrap();
        let before = s.posterior(&[0.5]).unwrap().sigma;
        let up = s.update(&[0.5], 0.35).unwrap();
        let after = up.posterior(&[0.5]).unwrap().sigma;
        assert!(after < before);
        let refit = GpState::fit(se(0.2), PointSet::from_rows(&[vec![0.5], vec![0.5]]).unwrap(), vec![0.3, 0.35], 0.04).unwrap();
        assert!((refit.posterior(&[0.5]).unwrap().sigma - after).abs() < 1e-8);
    }

    #[test]
    fn variance_never_increases_with_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let k = se(0.25);
        let probes: Vec<[f64; 1]> = (0..20).map(|i| [i as f64 / 19.0]).collect();
        let mut s = GpState::prior(k, 1, 0.01).unwrap();
        for _ in 0..15 {
            let before: Vec<f64> = probes.iter().map(|q| s.posterior(q).unwrap().sigma).collect();
            s = s.update(&[rng.random::<f64>()], rng.random::<f64>()).unwrap();
            for (q, b) in probes.iter().zip(before) {
                let a = s.posterior(q).unwrap().sigma;
                assert!(a <= b + 1e-10 && (0.0..=1.0).contains(&a));
            }
        }
    }

    #[test]
    fn posterior_many_agrees_with_pointwise() {
        let grid = PointSet::grid(2, 6, 1.0).unwrap();
        let x = PointSet::from_rows(&[vec![0.1, 0.2], vec![0.8, 0.5], vec![0.4, 0.4]]).unwrap();
        let s = GpState::fit(se(0.3), x, vec![0.5, -0.2, 1.0], 0.01).unwrap();
        let many = s.posterior_many(&grid).unwrap();
        for (i, row) in grid.rows().enumerate() {
            let p = s.posterior(row).unwrap();
            assert!((p.mu - many[i].mu).abs() < 1e-12 && (p.sigma - many[i].sigma).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_rejects_bad_input() {
        let x = PointSet::from_rows(&[vec![0.1]]).unwrap();
        assert!(GpState::fit(se(0.3), x.clone(), vec![1.0, 2.0], 0.0).is_err());
        assert!(GpState::fit(se(0.3), x, vec![1.0], -1.0).is_err());
    }

    #[test]
    fn prior_sample_is_deterministic() {
        let grid = PointSet::grid(1, 50, 1.0).unwrap();
        let a = sample_prior(&se(0.2), grid.clone(), 42).unwrap();
        let b = sample_prior(&se(0.2), grid, 42).unwrap();
        assert_eq!(a.f, b.f);
        assert_eq!(a.f[a.x_star_idx], a.f_star);
        assert!(a.f.iter().all(|&v| v >= a.f_star));
        assert!(a.m_bound >= a.f_star.abs());
    }

    #[test]
    fn single_point_prior_moments() {
        let sampler = PriorSampler::new(&se(0.2), PointSet::from_rows(&[vec![0.5]]).unwrap()).unwrap();
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|s| sampler.sample(s as u64).f[0]).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((0.98..=1.02).contains(&var), "var {var}");
    }

    #[test]
    fn prior_covariance_matches_kernel() {
        let k = se(0.3);
        let grid = PointSet::from_rows(&[vec![0.0], vec![0.15], vec![0.6]]).unwrap();
        let sampler = PriorSampler::new(&k, grid.clone()).unwrap();
        let n = 10_000;
        let draws: Vec<Vec<f64>> = (0..n).map(|s| sampler.sample(1000 + s as u64).f).collect();
        for i in 0..3 {
            for j in 0..3 {
                let c = draws.iter().map(|f| f[i] * f[j]).sum::<f64>() / n as f64;
                let want = k.eval(grid.row(i), grid.row(j)).unwrap();
                assert!((c - want).abs() < 0.05, "({i},{j}) {c} vs {want}");
            }
        }
    }

    #[test]
    fn info_gain_values() {
        assert_eq!(info_gain(&[], 0.1).unwrap(), 0.0);
        assert!((info_gain(&[1.0], 0.1).unwrap() - 1.198_947_636_399_185_3).abs() < 1e-12);
        assert_eq!(info_gain(&[0.0, 0.0], 0.1).unwrap(), 0.0);
        assert!(matches!(info_gain(&[0.5], 0.0), Err(Error::Domain(_))));
        assert!(info_gain(&[1.5], 0.1).is_err());
    }

    #[test]
    fn variance_sum_cases() {
        let e = variance_sum_check(&[], 0.1).unwrap();
        assert_eq!((e.lhs, e.rhs, e.holds), (0.0, 0.0, true));
        let one = variance_sum_check(&[1.0], 0.1).unwrap();
        assert_eq!(one.lhs, 1.0);
        assert!((one.rhs - 1.0).abs() < 1e-12 && one.holds);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let s: Vec<f64> = (0..30).map(|_| rng.random::<f64>()).collect();
            assert!(variance_sum_check(&s, 0.0025).unwrap().holds);
        }
    }
}
