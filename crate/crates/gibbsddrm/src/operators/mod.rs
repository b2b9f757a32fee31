//! Parametric linear operators with SVD access.
//!
//! Every operator `H_φ` used by the samplers exposes the pieces of its
//! singular value decomposition `H = U Σ Vᵀ` that spectral-space sampling
//! needs: the data-side rotation (`to_spectral_data` / `from_spectral_data`),
//! the pseudo-inverted measurement transform `ȳ = Σ† Uᵀ y`, per-bin singular
//! values, and the gradient of the Gaussian data-fit term with respect to the
//! operator parameters φ.
//!
//! Circulant operators diagonalize under the DFT, so their factors are kept
//! implicit (transfer function plus per-bin phases) and spectral bins are
//! complex. Dense operators use an explicit SVD and real bins. Samplers treat
//! both uniformly: noise drawn in signal space and pushed through
//! `to_spectral_data` has unit per-bin variance and the right conjugate
//! symmetry, so inverse-transformed samples stay in the operator's native
//! domain.

mod circulant;
mod complex_circulant;
mod dense;
mod fft;
mod scalar_gain;

pub use circulant::CirculantConvOperator;
pub use complex_circulant::ComplexCirculantOperator;
pub use dense::DenseOperator;
pub use scalar_gain::ScalarGainOperator;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative cutoff below which a singular value is routed to the `s = 0`
/// branch of the spectral updates. Numerically rank-deficient bins must not
/// be divided by.
pub const SINGULAR_ZERO_REL_THRESHOLD: f64 = 1e-8;

/// True when `s` counts as zero relative to the largest singular value.
pub fn is_zero_singular(s: f64, s_max: f64) -> bool {
    s <= SINGULAR_ZERO_REL_THRESHOLD * s_max
}

/// A linear operator `H_φ` with spectral (SVD) access.
///
/// Vectors are always real `f64` storage; complex-valued problems interleave
/// re/im pairs and expose half as many (complex) spectral bins.
pub trait SpectralOperator: Send {
    /// Storage dimension of data-side vectors.
    fn dim_x(&self) -> usize;

    /// Storage dimension of measurement vectors.
    fn dim_y(&self) -> usize;

    /// Number of spectral bins (length of `to_spectral_data` output).
    fn n_bins(&self) -> usize;

    /// Current operator parameters.
    fn phi(&self) -> &[f64];

    /// Replaces the parameters and rebuilds cached spectral data.
    fn set_phi(&mut self, phi: &[f64]) -> Result<()>;

    /// Projects a parameter vector onto the operator's feasible set.
    /// Default: unconstrained.
    fn project_phi(&self, _phi: &mut [f64]) {}

    /// `y = H_φ x`.
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// `Hᵀ y` (the adjoint with respect to the real inner product).
    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>>;

    /// Singular values as a descending multiset.
    fn singular_values(&self) -> Vec<f64>;

    /// Per-bin singular values aligned with the spectral transforms
    /// (not sorted). Length equals `n_bins()`.
    fn bin_singular_values(&self) -> &[f64];

    /// `x̄ = Vᵀ x` (unitary; complex bins for circulant operators).
    fn to_spectral_data(&self, x: &[f64]) -> Result<Vec<Complex64>>;

    /// `x = V x̄`; inverse of `to_spectral_data`.
    fn from_spectral_data(&self, xbar: &[Complex64]) -> Result<Vec<f64>>;

    /// `ȳ = Σ† Uᵀ y`: bins with `s_i = 0` map to 0 (pseudo-inverse
    /// convention). Length equals `n_bins()`.
    fn to_spectral_measurement(&self, y: &[f64]) -> Result<Vec<Complex64>>;

    /// Gradient with respect to φ of `−‖y − H_φ x‖² / (2 σ_y²)`.
    fn datafit_grad(&self, x: &[f64], y: &[f64], sigma_y: f64) -> Result<Vec<f64>>;

    /// Largest singular value (operator norm).
    fn operator_norm(&self) -> f64 {
        self.bin_singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }
}

/// Clips a kernel to nonnegative entries and renormalizes it to sum 1.
/// If everything clips to zero the uniform kernel is returned.
pub fn project_kernel_simplex(kernel: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = kernel.iter().map(|&k| k.max(0.0)).collect();
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        for v in &mut out {
            *v /= total;
        }
    } else {
        let u = 1.0 / out.len() as f64;
        out.iter_mut().for_each(|v| *v = u);
    }
    out
}

pub(crate) fn check_sigma_y(sigma_y: f64) -> Result<()> {
    if !(sigma_y > 0.0) || !sigma_y.is_finite() {
        return Err(Error::invalid("sigma_y must be positive and finite"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_keeps_feasible_kernel() {
        assert_eq!(project_kernel_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
    }

    #[test]
    fn simplex_clips_then_normalizes() {
        assert_eq!(project_kernel_simplex(&[-1.0, 1.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn simplex_all_clipped_falls_back_to_uniform() {
        let out = project_kernel_simplex(&[-1.0, -2.0, -3.0]);
        for v in out {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn simplex_is_idempotent() {
        let once = project_kernel_simplex(&[0.4, -0.3, 2.2, 0.0]);
        let twice = project_kernel_simplex(&once);
        assert_eq!(once, twice);
    }
}
