//! Noise schedules and analytic denoisers.
//!
//! The diffusion convention throughout the crate is variance-exploding:
//! `x_t = x_0 + σ_t ε` with a strictly increasing ladder `0 = σ_0 < σ_1 < … < σ_T`.
//! Denoisers map a noisy latent back to the minimum-mean-square-error estimate
//! of the clean data, `E[x_0 | x_t]`. For Gaussian and Gaussian-mixture priors
//! this expectation is available in closed form, so the denoisers here are
//! exact stand-ins for a learned score network.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Noise-level ladder `σ_0 .. σ_T` driving the diffusion prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSchedule {
    sigmas: Vec<f64>,
}

impl NoiseSchedule {
    /// Builds a schedule from raw levels. Requires `σ_0 = 0`, strict increase,
    /// and at least two entries.
    pub fn from_sigmas(sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.len() < 2 {
            return Err(Error::invalid("schedule needs at least two levels (T >= 1)"));
        }
        if sigmas[0] != 0.0 {
            return Err(Error::invalid("schedule must start at sigma_0 = 0"));
        }
        for w in sigmas.windows(2) {
            if !(w[0] < w[1]) || !w[1].is_finite() {
                return Err(Error::invalid("schedule sigmas must be strictly increasing and finite"));
            }
        }
        Ok(Self { sigmas })
    }

    /// Linear ladder `σ_t = sigma_max · t / T`.
    pub fn linear(t_steps: usize, sigma_max: f64) -> Result<Self> {
        if t_steps == 0 {
            return Err(Error::invalid("T must be >= 1"));
        }
        if !(sigma_max > 0.0) || !sigma_max.is_finite() {
            return Err(Error::invalid("sigma_max must be positive and finite"));
        }
        let sigmas = (0..=t_steps)
            .map(|t| sigma_max * t as f64 / t_steps as f64)
            .collect();
        Ok(Self { sigmas })
    }

    /// Number of diffusion steps `T`.
    pub fn t_steps(&self) -> usize {
        self.sigmas.len() - 1
    }

    /// Noise level at step `t` (`0 <= t <= T`).
    pub fn sigma(&self, t: usize) -> f64 {
        self.sigmas[t]
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }
}

/// Latent diffusion state: the step index and the latent vector `x_t`.
///
/// Complex-valued problems store interleaved re/im pairs, so `x` is always a
/// real vector of the operator's storage dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentState {
    pub t: usize,
    pub x: Vec<f64>,
}

/// An MMSE denoiser: `estimate(x_noisy, σ) = E[x_0 | x_0 + σε = x_noisy]`.
///
/// Implementations must be pure and deterministic given `(x, σ)`, and must
/// satisfy `estimate(x, 0) = x`.
pub trait Denoiser: Send + Sync {
    fn estimate(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>>;

    /// Data dimension the denoiser expects.
    fn dim(&self) -> usize;
}

/// Isotropic Gaussian prior `x_0 ~ N(mean, variance · I)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPrior {
    pub mean: Vec<f64>,
    pub variance: f64,
}

impl GaussianPrior {
    pub fn new(mean: Vec<f64>, variance: f64) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::invalid("Gaussian prior mean must be non-empty"));
        }
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::invalid("Gaussian prior variance must be positive"));
        }
        Ok(Self { mean, variance })
    }

    /// Zero-mean convenience constructor.
    pub fn centered(dim: usize, variance: f64) -> Result<Self> {
        Self::new(vec![0.0; dim], variance)
    }
}

impl Denoiser for GaussianPrior {
    /// Posterior mean of the linear-Gaussian model:
    /// `μ + v/(v+σ²) (x − μ)`.
    fn estimate(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>> {
        check_dim("gaussian_denoise input", self.mean.len(), x.len())?;
        if sigma < 0.0 {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        let shrink = self.variance / (self.variance + sigma * sigma);
        Ok(self
            .mean
            .iter()
            .zip(x)
            .map(|(&m, &xi)| m + shrink * (xi - m))
            .collect())
    }

    fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Gaussian mixture prior with shared isotropic component variance.
///
/// `x_0 ~ Σ_k w_k N(μ_k, v · I)`. The shared variance keeps the posterior
/// mean in closed form while still producing genuinely multimodal priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmPrior {
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variance: f64,
}

impl GmmPrior {
    pub fn new(weights: Vec<f64>, means: Vec<Vec<f64>>, variance: f64) -> Result<Self> {
        if weights.is_empty() || means.is_empty() {
            return Err(Error::invalid("mixture must have at least one component"));
        }
        if weights.len() != means.len() {
            return Err(Error::invalid("mixture weights and means must have equal length"));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::invalid("mixture weights must be nonnegative and finite"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("mixture weights must not all be zero"));
        }
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::invalid("mixture weights must sum to 1"));
        }
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::invalid("mixture variance must be positive"));
        }
        let dim = means[0].len();
        if dim == 0 || means.iter().any(|m| m.len() != dim) {
            return Err(Error::invalid("mixture means must be non-empty and share one dimension"));
        }
        // Renormalize exactly so downstream responsibilities sum to 1.
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(Self {
            weights,
            means,
            variance,
        })
    }

    pub fn n_components(&self) -> usize {
        self.weights.len()
    }

    /// Log-density of the mixture at `x` (used by oracles and toy models).
    pub fn log_density(&self, x: &[f64]) -> f64 {
        let d = self.means[0].len() as f64;
        let v = self.variance;
        let log_norm = -0.5 * d * (2.0 * std::f64::consts::PI * v).ln();
        let logs: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.means)
            .map(|(&w, m)| {
                let sq: f64 = m.iter().zip(x).map(|(&mi, &xi)| (xi - mi).powi(2)).sum();
                w.ln() + log_norm - 0.5 * sq / v
            })
            .collect();
        log_sum_exp(&logs)
    }
}

impl Denoiser for GmmPrior {
    /// Closed-form posterior mean under `x_t = x_0 + σε`:
    /// the responsibility-weighted average of per-component shrunken means,
    /// with responsibilities computed via log-sum-exp for stability.
    fn estimate(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>> {
        let dim = self.means[0].len();
        check_dim("gmm_denoise input", dim, x.len())?;
        if sigma < 0.0 {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        let s2 = self.variance + sigma * sigma;
        let shrink = self.variance / s2;

        // log responsibilities: log w_k - ||x - μ_k||² / (2(v+σ²)), common
        // normalizer dropped.
        let log_resp: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.means)
            .map(|(&w, m)| {
                let sq: f64 = m.iter().zip(x).map(|(&mi, &xi)| (xi - mi).powi(2)).sum();
                w.ln() - 0.5 * sq / s2
            })
            .collect();
        let lse = log_sum_exp(&log_resp);

        let mut out = vec![0.0; dim];
        for (lr, m) in log_resp.iter().zip(&self.means) {
            let r = (lr - lse).exp();
            for (o, (&mi, &xi)) in out.iter_mut().zip(m.iter().zip(x)) {
                *o += r * (mi + shrink * (xi - mi));
            }
        }
        Ok(out)
    }

    fn dim(&self) -> usize {
        self.means[0].len()
    }
}

/// Numerically stable `log Σ exp(v_i)`.
pub fn log_sum_exp(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + vals.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_schedule_two_point() {
        let s = NoiseSchedule::linear(1, 2.0).unwrap();
        assert_eq!(s.sigmas(), &[0.0, 2.0]);
    }

    #[test]
    fn linear_schedule_spacing() {
        let s = NoiseSchedule::linear(4, 1.0).unwrap();
        assert_eq!(s.sigmas(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(s.t_steps(), 4);
    }

    #[test]
    fn linear_schedule_rejects_bad_args() {
        assert!(NoiseSchedule::linear(0, 1.0).is_err());
        assert!(NoiseSchedule::linear(4, 0.0).is_err());
        assert!(NoiseSchedule::linear(4, -1.0).is_err());
    }

    #[test]
    fn schedule_from_sigmas_validates() {
        assert!(NoiseSchedule::from_sigmas(vec![0.0, 0.5, 1.0]).is_ok());
        assert!(NoiseSchedule::from_sigmas(vec![0.1, 0.5]).is_err());
        assert!(NoiseSchedule::from_sigmas(vec![0.0, 0.5, 0.5]).is_err());
        assert!(NoiseSchedule::from_sigmas(vec![0.0]).is_err());
    }

    #[test]
    fn gaussian_denoise_shrinks_by_half() {
        let p = GaussianPrior::centered(1, 1.0).unwrap();
        assert_eq!(p.estimate(&[2.0], 1.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn gaussian_denoise_identity_at_zero_noise() {
        let p = GaussianPrior::centered(1, 1.0).unwrap();
        assert_eq!(p.estimate(&[3.0], 0.0).unwrap(), vec![3.0]);
    }

    #[test]
    fn gaussian_denoise_closed_form_by_hand() {
        // μ=[1,1], v=4, x=[5,1], σ=2: shrink = 4/8 = 1/2, so [1+2, 1+0].
        let p = GaussianPrior::new(vec![1.0, 1.0], 4.0).unwrap();
        let out = p.estimate(&[5.0, 1.0], 2.0).unwrap();
        assert_abs_diff_eq!(out[0], 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gaussian_denoise_dimension_mismatch() {
        let p = GaussianPrior::centered(2, 1.0).unwrap();
        assert!(p.estimate(&[1.0], 1.0).is_err());
    }

    #[test]
    fn gmm_single_component_equals_gaussian() {
        let gmm = GmmPrior::new(vec![1.0], vec![vec![0.5, -0.25]], 0.8).unwrap();
        let g = GaussianPrior::new(vec![0.5, -0.25], 0.8).unwrap();
        for sigma in [0.0, 0.3, 2.0] {
            let x = [1.7, -0.9];
            let a = gmm.estimate(&x, sigma).unwrap();
            let b = g.estimate(&x, sigma).unwrap();
            for (ai, bi) in a.iter().zip(&b) {
                assert_abs_diff_eq!(ai, bi, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn gmm_symmetric_mixture_fixes_origin() {
        let gmm = GmmPrior::new(vec![0.5, 0.5], vec![vec![-1.5], vec![1.5]], 0.25).unwrap();
        let out = gmm.estimate(&[0.0], 1.0).unwrap();
        assert_abs_diff_eq!(out[0], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gmm_rejects_invalid_mixtures() {
        assert!(GmmPrior::new(vec![], vec![], 1.0).is_err());
        assert!(GmmPrior::new(vec![-0.5, 1.5], vec![vec![0.0], vec![1.0]], 1.0).is_err());
        assert!(GmmPrior::new(vec![0.2, 0.2], vec![vec![0.0], vec![1.0]], 1.0).is_err());
        assert!(GmmPrior::new(vec![0.5, 0.5], vec![vec![0.0], vec![1.0]], 0.0).is_err());
        assert!(GmmPrior::new(vec![0.5, 0.5], vec![vec![0.0], vec![1.0, 2.0]], 1.0).is_err());
    }

    #[test]
    fn gmm_identity_at_zero_noise() {
        let gmm =
            GmmPrior::new(vec![0.3, 0.7], vec![vec![-2.0, 0.0], vec![2.0, 1.0]], 0.25).unwrap();
        let x = [0.37, -1.2];
        let out = gmm.estimate(&x, 0.0).unwrap();
        for (o, xi) in out.iter().zip(&x) {
            assert_abs_diff_eq!(o, xi, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        assert_abs_diff_eq!(
            log_sum_exp(&[-1000.0, -1000.0]),
            -1000.0 + 2f64.ln(),
            epsilon = 1e-12
        );
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }
}
