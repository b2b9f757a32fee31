//! Independent brute-force references.
//!
//! Everything in this module is deliberately dumb: conjugate closed forms,
//! dense grids, and histograms. Tests and acceptance criteria compare the
//! samplers against these routes, so nothing here may call into the sampler
//! modules — the dependency only points the other way.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::operators::{DenseOperator, SpectralOperator};
use crate::priors::{log_sum_exp, GaussianPrior, GmmPrior, NoiseSchedule};

/// Conjugate posterior of `x_0 | y` for `y = H x_0 + N(0, σ_y² I)` with an
/// isotropic Gaussian prior: precision `I/v + HᵀH/σ_y²`.
pub fn exact_gaussian_posterior(
    prior: &GaussianPrior,
    op: &DenseOperator,
    y: &[f64],
    sigma_y: f64,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    if !(sigma_y > 0.0) {
        return Err(Error::invalid("sigma_y must be positive"));
    }
    let d = prior.mean.len();
    if op.dim_x() != d {
        return Err(Error::invalid("prior and operator dimensions differ"));
    }
    if op.dim_y() != y.len() {
        return Err(Error::invalid("measurement dimension mismatch"));
    }
    let h = op.matrix();
    let inv_vy = 1.0 / (sigma_y * sigma_y);
    let precision = DMatrix::identity(d, d) / prior.variance + h.transpose() * h * inv_vy;
    let chol = Cholesky::new(precision.clone()).ok_or_else(|| {
        Error::Numerical(format!(
            "posterior precision not positive definite (v={}, sigma_y={})",
            prior.variance, sigma_y
        ))
    })?;
    let rhs = DVector::from_row_slice(&prior.mean) / prior.variance
        + h.transpose() * DVector::from_row_slice(y) * inv_vy;
    let mean = chol.solve(&rhs);
    let cov = chol.inverse();
    Ok((mean, cov))
}

/// Regular grid description for low-dimensional quadrature.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Points per dimension.
    pub n: usize,
    /// Discretization-error tolerance; exceeding it raises the warning flag.
    pub tol: f64,
}

impl GridSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, n: usize) -> Self {
        Self { lo, hi, n, tol: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub mean: Vec<f64>,
    /// Difference against the half-resolution grid (discretization estimate).
    pub est_error: f64,
    pub too_coarse: bool,
}

/// Posterior mean `E[x | y]` for a GMM prior by grid quadrature over
/// `d_x ≤ 2`. The operator only contributes through `apply`.
pub fn quadrature_posterior_mean(
    prior: &GmmPrior,
    op: &dyn SpectralOperator,
    y: &[f64],
    sigma_y: f64,
    grid: &GridSpec,
) -> Result<QuadratureResult> {
    let d = prior.means[0].len();
    if d > 2 {
        return Err(Error::invalid("quadrature supports d_x <= 2"));
    }
    if grid.lo.len() != d || grid.hi.len() != d {
        return Err(Error::invalid("grid bounds must match the prior dimension"));
    }
    if grid.n < 8 {
        return Err(Error::invalid("grid must have at least 8 points per dimension"));
    }
    let full = grid_mean(prior, op, y, sigma_y, grid, 1)?;
    let half = grid_mean(prior, op, y, sigma_y, grid, 2)?;
    let est_error = full
        .iter()
        .zip(&half)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(QuadratureResult {
        mean: full,
        est_error,
        too_coarse: est_error > grid.tol,
    })
}

fn grid_mean(
    prior: &GmmPrior,
    op: &dyn SpectralOperator,
    y: &[f64],
    sigma_y: f64,
    grid: &GridSpec,
    stride: usize,
) -> Result<Vec<f64>> {
    let d = prior.means[0].len();
    let axis: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            (0..grid.n)
                .step_by(stride)
                .map(|i| grid.lo[k] + (grid.hi[k] - grid.lo[k]) * i as f64 / (grid.n - 1) as f64)
                .collect()
        })
        .collect();
    let inv_2vy = 0.5 / (sigma_y * sigma_y);

    let mut log_w = Vec::new();
    let mut points = Vec::new();
    let mut eval = |x: Vec<f64>| -> Result<()> {
        let hx = op.apply(&x)?;
        let sq: f64 = hx.iter().zip(y).map(|(&h, &yi)| (yi - h) * (yi - h)).sum();
        log_w.push(prior.log_density(&x) - inv_2vy * sq);
        points.push(x);
        Ok(())
    };
    match d {
        1 => {
            for &a in &axis[0] {
                eval(vec![a])?;
            }
        }
        2 => {
            for &a in &axis[0] {
                for &b in &axis[1] {
                    eval(vec![a, b])?;
                }
            }
        }
        _ => unreachable!(),
    }

    let lse = log_sum_exp(&log_w);
    if lse == f64::NEG_INFINITY {
        return Err(Error::Numerical("quadrature mass is zero on the grid".into()));
    }
    let mut mean = vec![0.0; d];
    for (lw, x) in log_w.iter().zip(&points) {
        let w = (lw - lse).exp();
        for (m, &xi) in mean.iter_mut().zip(x) {
            *m += w * xi;
        }
    }
    Ok(mean)
}

/// Central finite differences of a scalar function, the gradient oracle:
/// `g_i ≈ [f(x + h·e_i) − f(x − h·e_i)] / 2h`.
pub fn finite_difference_grad(
    mut f: impl FnMut(&[f64]) -> Result<f64>,
    x: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let hi = f(&probe)?;
        probe[i] = x[i] - h;
        let lo = f(&probe)?;
        probe[i] = x[i];
        grad.push((hi - lo) / (2.0 * h));
    }
    Ok(grad)
}

/// Per-dimension histogram binning.
#[derive(Debug, Clone, Copy)]
pub struct Binning {
    pub n_bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Binning {
    pub fn new(n_bins: usize, lo: f64, hi: f64) -> Self {
        Self { n_bins, lo, hi }
    }

    fn index(&self, v: f64) -> usize {
        let t = (v - self.lo) / (self.hi - self.lo);
        ((t * self.n_bins as f64) as isize).clamp(0, self.n_bins as isize - 1) as usize
    }
}

/// Total-variation distance between binned empirical distributions.
/// Samples outside the range clamp to the edge bins.
pub fn tv_distance(a: &[Vec<f64>], b: &[Vec<f64>], binning: &[Binning]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("sample sets must be non-empty"));
    }
    let d = binning.len();
    if a[0].len() != d || b[0].len() != d {
        return Err(Error::invalid("samples and binning dimensions differ"));
    }
    let total_bins: usize = binning.iter().map(|b| b.n_bins).product();
    let flat = |x: &[f64]| -> usize {
        let mut idx = 0;
        for (bi, &v) in binning.iter().zip(x) {
            idx = idx * bi.n_bins + bi.index(v);
        }
        idx
    };
    let mut pa = vec![0.0; total_bins];
    let mut pb = vec![0.0; total_bins];
    for s in a {
        pa[flat(s)] += 1.0 / a.len() as f64;
    }
    for s in b {
        pb[flat(s)] += 1.0 / b.len() as f64;
    }
    Ok(0.5 * pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// 1-D convenience wrapper for [`tv_distance`].
pub fn tv_distance_1d(a: &[f64], b: &[f64], binning: Binning) -> Result<f64> {
    let av: Vec<Vec<f64>> = a.iter().map(|&v| vec![v]).collect();
    let bv: Vec<Vec<f64>> = b.iter().map(|&v| vec![v]).collect();
    tv_distance(&av, &bv, &[binning])
}

/// TV distance between an empirical sample and an exactly integrable 1-D
/// density (bin masses from the supplied CDF).
pub fn tv_distance_vs_cdf(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    binning: Binning,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("sample set must be non-empty"));
    }
    let mut emp = vec![0.0; binning.n_bins];
    for &s in samples {
        emp[binning.index(s)] += 1.0 / samples.len() as f64;
    }
    let width = (binning.hi - binning.lo) / binning.n_bins as f64;
    let mut tv = 0.0;
    for (i, &e) in emp.iter().enumerate() {
        let lo = binning.lo + i as f64 * width;
        let mut mass = cdf(lo + width) - cdf(lo);
        // Edge bins absorb the tails, mirroring the clamping of samples.
        if i == 0 {
            mass += cdf(lo);
        }
        if i == binning.n_bins - 1 {
            mass += 1.0 - cdf(lo + width);
        }
        tv += 0.5 * (e - mass).abs();
    }
    Ok(tv)
}

/// A 1-D density tabulated on a regular grid, samplable by inverse CDF.
/// This is the "exact conditional" workhorse for the reference samplers when
/// a conditional is non-Gaussian but one-dimensional.
#[derive(Debug, Clone)]
pub struct GridDistribution1d {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl GridDistribution1d {
    /// Tabulates `exp(log_density)` on `n` points over `[lo, hi]` and builds
    /// the trapezoid CDF.
    pub fn from_log_density(
        lo: f64,
        hi: f64,
        n: usize,
        log_density: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if !(hi > lo) || n < 16 {
            return Err(Error::invalid("grid distribution needs hi > lo and n >= 16"));
        }
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let logs: Vec<f64> = xs.iter().map(|&x| log_density(x)).collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY || !m.is_finite() {
            return Err(Error::Numerical("grid density is degenerate".into()));
        }
        let dens: Vec<f64> = logs.iter().map(|&l| (l - m).exp()).collect();
        let mut cdf = vec![0.0; n];
        for i in 1..n {
            cdf[i] = cdf[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * (xs[i] - xs[i - 1]);
        }
        let total = cdf[n - 1];
        if !(total > 0.0) {
            return Err(Error::Numerical("grid density has zero mass".into()));
        }
        for c in cdf.iter_mut() {
            *c /= total;
        }
        Ok(Self { xs, cdf })
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.quantile(u)
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.cdf.len();
        let idx = self.cdf.partition_point(|&c| c < u);
        if idx == 0 {
            return self.xs[0];
        }
        if idx >= n {
            return self.xs[n - 1];
        }
        let (c0, c1) = (self.cdf[idx - 1], self.cdf[idx]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.xs[idx - 1] + t * (self.xs[idx] - self.xs[idx - 1])
    }

    pub fn cdf_at(&self, x: f64) -> f64 {
        let idx = self.xs.partition_point(|&v| v < x);
        if idx == 0 {
            return 0.0;
        }
        if idx >= self.xs.len() {
            return 1.0;
        }
        let (x0, x1) = (self.xs[idx - 1], self.xs[idx]);
        let t = (x - x0) / (x1 - x0);
        self.cdf[idx - 1] + t * (self.cdf[idx] - self.cdf[idx - 1])
    }
}

/// Prior choices for toy models.
#[derive(Debug, Clone)]
pub enum ToyPrior {
    Gaussian(GaussianPrior),
    Gmm(GmmPrior),
}

impl ToyPrior {
    pub fn dim(&self) -> usize {
        match self {
            ToyPrior::Gaussian(g) => g.mean.len(),
            ToyPrior::Gmm(g) => g.means[0].len(),
        }
    }
}

/// Operator choices for toy models.
#[derive(Debug, Clone)]
pub enum ToyOperator {
    /// A fixed dense operator (non-blind toy).
    Fixed(DenseOperator),
    /// The scalar family `H_φ = φ I` with a Gaussian prior on φ.
    ScalarFamily { phi_mean: f64, phi_var: f64 },
}

/// A small model on which brute-force checks are feasible: `d_x ≤ 2`,
/// `d_y ≤ 2`, `T ≤ 3`. Latents follow `x_t = x_0 + σ_t ε` independently per
/// step, and `y = H x_0 + σ_y z`.
#[derive(Debug, Clone)]
pub struct ToyModel {
    pub prior: ToyPrior,
    pub operator: ToyOperator,
    pub sigma_y: f64,
    pub schedule: NoiseSchedule,
    pub y: Vec<f64>,
}

impl ToyModel {
    pub fn new(
        prior: ToyPrior,
        operator: ToyOperator,
        sigma_y: f64,
        schedule: NoiseSchedule,
        y: Vec<f64>,
    ) -> Result<Self> {
        if schedule.t_steps() > 3 {
            return Err(Error::invalid("toy model schedules are limited to T <= 3"));
        }
        if !(sigma_y > 0.0) {
            return Err(Error::invalid("toy model sigma_y must be positive"));
        }
        if prior.dim() > 2 {
            return Err(Error::invalid("toy models are limited to d_x <= 2"));
        }
        match &operator {
            ToyOperator::Fixed(op) => {
                if op.dim_y() > 2 || op.dim_x() != prior.dim() || op.dim_y() != y.len() {
                    return Err(Error::invalid("toy operator dimensions must be <= 2 and consistent"));
                }
            }
            ToyOperator::ScalarFamily { phi_var, .. } => {
                if !(*phi_var > 0.0) {
                    return Err(Error::invalid("phi prior variance must be positive"));
                }
                if y.len() != prior.dim() {
                    return Err(Error::invalid("scalar-family toy needs dim(y) = dim(x)"));
                }
            }
        }
        Ok(Self { prior, operator, sigma_y, schedule, y })
    }

    /// Extracts the fully scalar linear-Gaussian case (Gaussian prior with
    /// `d_x = 1` and the scalar operator family), on which every reference
    /// sampler conditional is exactly computable.
    pub fn as_scalar(&self) -> Result<ScalarToy> {
        let (prior_mean, prior_var) = match &self.prior {
            ToyPrior::Gaussian(g) if g.mean.len() == 1 => (g.mean[0], g.variance),
            _ => {
                return Err(Error::invalid(
                    "reference samplers support only the scalar Gaussian-prior toy",
                ))
            }
        };
        let (phi_mean, phi_var) = match self.operator {
            ToyOperator::ScalarFamily { phi_mean, phi_var } => (phi_mean, phi_var),
            _ => {
                return Err(Error::invalid(
                    "reference samplers need the scalar operator family",
                ))
            }
        };
        Ok(ScalarToy {
            prior_mean,
            prior_var,
            phi_mean,
            phi_var,
            sigma_y: self.sigma_y,
            schedule: self.schedule.clone(),
            y: self.y[0],
        })
    }
}

/// The scalar linear-Gaussian toy: `x_0 ~ N(μ0, v0)`,
/// `x_t = x_0 + σ_t ε` independently per step, `y = φ x_0 + σ_y z`,
/// `φ ~ N(μφ, vφ)`.
#[derive(Debug, Clone)]
pub struct ScalarToy {
    pub prior_mean: f64,
    pub prior_var: f64,
    pub phi_mean: f64,
    pub phi_var: f64,
    pub sigma_y: f64,
    pub schedule: NoiseSchedule,
    pub y: f64,
}

impl ScalarToy {

    /// Gaussian posterior of `x_0` given observations `(value, noise_var)`
    /// of the form `value = x_0 + noise` plus optionally `y = φ x_0 + σ_y z`.
    pub fn x0_posterior(&self, obs: &[(f64, f64)], phi: Option<f64>) -> (f64, f64) {
        let mut precision = 1.0 / self.prior_var;
        let mut lean = self.prior_mean / self.prior_var;
        for &(v, var) in obs {
            precision += 1.0 / var;
            lean += v / var;
        }
        if let Some(p) = phi {
            precision += p * p / (self.sigma_y * self.sigma_y);
            lean += p * self.y / (self.sigma_y * self.sigma_y);
        }
        (lean / precision, 1.0 / precision)
    }

    /// Log-density of `φ | x_{t:T}, y` with `x_0` marginalized out:
    /// `N(φ; μφ, vφ) · N(y; φ m, σ_y² + φ² s²)` where `(m, s²)` is the
    /// posterior of `x_0` given the conditioning latents.
    pub fn phi_log_density_marginal(&self, m: f64, s2: f64) -> impl Fn(f64) -> f64 + '_ {
        move |phi: f64| {
            let var = self.sigma_y * self.sigma_y + phi * phi * s2;
            let resid = self.y - phi * m;
            -0.5 * (phi - self.phi_mean).powi(2) / self.phi_var
                - 0.5 * var.ln()
                - 0.5 * resid * resid / var
        }
    }

    /// Exact Gaussian conditional `φ | x_0, y`.
    pub fn phi_posterior_given_x0(&self, x0: f64) -> (f64, f64) {
        let precision = 1.0 / self.phi_var + x0 * x0 / (self.sigma_y * self.sigma_y);
        let lean = self.phi_mean / self.phi_var + x0 * self.y / (self.sigma_y * self.sigma_y);
        (lean / precision, 1.0 / precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn identity_op(d: usize) -> DenseOperator {
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1.0;
        }
        DenseOperator::from_rows(d, d, &entries).unwrap()
    }

    #[test]
    fn gaussian_posterior_equal_precision_average() {
        let prior = GaussianPrior::centered(1, 1.0).unwrap();
        let op = identity_op(1);
        let (mean, cov) = exact_gaussian_posterior(&prior, &op, &[2.0], 1.0).unwrap();
        assert_abs_diff_eq!(mean[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cov[(0, 0)], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_posterior_uninformative_limit() {
        let prior = GaussianPrior::new(vec![0.3, -0.7], 2.0).unwrap();
        let op = identity_op(2);
        let (mean, _) = exact_gaussian_posterior(&prior, &op, &[5.0, 5.0], 1e6).unwrap();
        assert_abs_diff_eq!(mean[0], 0.3, epsilon = 1e-4);
        assert_abs_diff_eq!(mean[1], -0.7, epsilon = 1e-4);
    }

    #[test]
    fn gaussian_posterior_matches_quadrature_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let normal = Normal::new(0.0, 1.0).unwrap();
        for _ in 0..5 {
            let entries: Vec<f64> = (0..4).map(|_| normal.sample(&mut rng)).collect();
            let op = DenseOperator::from_rows(2, 2, &entries).unwrap();
            let prior = GaussianPrior::new(vec![0.2, -0.1], 0.5).unwrap();
            let y = [normal.sample(&mut rng), normal.sample(&mut rng)];
            let sigma_y = 0.8;
            let (mean, _) = exact_gaussian_posterior(&prior, &op, &y, sigma_y).unwrap();

            // One-component GMM makes the quadrature integrate the same model.
            let gmm = GmmPrior::new(vec![1.0], vec![vec![0.2, -0.1]], 0.5).unwrap();
            let grid = GridSpec::new(vec![-6.0, -6.0], vec![6.0, 6.0], 401);
            let quad = quadrature_posterior_mean(&gmm, &op, &y, sigma_y, &grid).unwrap();
            assert_abs_diff_eq!(quad.mean[0], mean[0], epsilon = 1e-4);
            assert_abs_diff_eq!(quad.mean[1], mean[1], epsilon = 1e-4);
        }
    }

    #[test]
    fn quadrature_flags_coarse_grids() {
        let gmm = GmmPrior::new(vec![0.5, 0.5], vec![vec![-2.0], vec![2.0]], 0.05).unwrap();
        let op = identity_op(1);
        let mut grid = GridSpec::new(vec![-5.0], vec![5.0], 16);
        grid.tol = 1e-10;
        let res = quadrature_posterior_mean(&gmm, &op, &[0.4], 0.5, &grid).unwrap();
        assert!(res.too_coarse);
    }

    #[test]
    fn tv_identical_and_disjoint() {
        let a: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64 / 100.0]).collect();
        let binning = [Binning::new(10, 0.0, 2.0)];
        assert_abs_diff_eq!(tv_distance(&a, &a, &binning).unwrap(), 0.0);
        let b: Vec<Vec<f64>> = (0..100).map(|i| vec![1.0 + i as f64 / 100.0]).collect();
        assert_abs_diff_eq!(tv_distance(&a, &b, &binning).unwrap(), 1.0);
    }

    #[test]
    fn tv_two_standard_normal_sets_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let a: Vec<f64> = (0..100_000).map(|_| normal.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..100_000).map(|_| normal.sample(&mut rng)).collect();
        let tv = tv_distance_1d(&a, &b, Binning::new(50, -4.0, 4.0)).unwrap();
        assert!(tv < 0.02, "tv = {tv}");
    }

    #[test]
    fn tv_rejects_empty_sets() {
        let a: Vec<Vec<f64>> = vec![];
        let b = vec![vec![0.0]];
        assert!(tv_distance(&a, &b, &[Binning::new(4, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn grid_distribution_reproduces_gaussian() {
        let dist = GridDistribution1d::from_log_density(-8.0, 8.0, 4097, |x| -0.5 * x * x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 50_000;
        let samples: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n as f64;
        assert_abs_diff_eq!(mean, 0.0, epsilon = 0.02);
        assert_abs_diff_eq!(var, 1.0, epsilon = 0.03);
        assert_abs_diff_eq!(dist.cdf_at(0.0), 0.5, epsilon = 1e-3);
    }

    #[test]
    fn toy_posterior_matches_dense_oracle() {
        let schedule = NoiseSchedule::linear(2, 1.0).unwrap();
        let toy = ToyModel::new(
            ToyPrior::Gaussian(GaussianPrior::new(vec![0.5], 2.0).unwrap()),
            ToyOperator::ScalarFamily { phi_mean: 1.0, phi_var: 0.5 },
            0.7,
            schedule,
            vec![1.3],
        )
        .unwrap()
        .as_scalar()
        .unwrap();
        let phi = 0.9;
        let (m, v) = toy.x0_posterior(&[], Some(phi));
        let prior = GaussianPrior::new(vec![0.5], 2.0).unwrap();
        let op = DenseOperator::from_rows(1, 1, &[phi]).unwrap();
        let (mean, cov) = exact_gaussian_posterior(&prior, &op, &[1.3], 0.7).unwrap();
        assert_abs_diff_eq!(m, mean[0], epsilon = 1e-12);
        assert_abs_diff_eq!(v, cov[(0, 0)], epsilon = 1e-12);
    }
}
