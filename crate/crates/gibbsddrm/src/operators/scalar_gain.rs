//! Scalar gain family `H_φ = φ · I`.
//!
//! The smallest nontrivial parameterized operator: one parameter, identity
//! spectral transforms. Used by the toy models and the 1-D parameter
//! estimation checks.

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

use super::{is_zero_singular, SpectralOperator};

#[derive(Clone, Debug)]
pub struct ScalarGainOperator {
    dim: usize,
    phi: Vec<f64>,
    bin_s: Vec<f64>,
}

impl ScalarGainOperator {
    pub fn new(dim: usize, gain: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if !gain.is_finite() {
            return Err(Error::invalid("gain must be finite"));
        }
        Ok(Self {
            dim,
            phi: vec![gain],
            bin_s: vec![gain.abs(); dim],
        })
    }

    pub fn gain(&self) -> f64 {
        self.phi[0]
    }
}

impl SpectralOperator for ScalarGainOperator {
    fn dim_x(&self) -> usize {
        self.dim
    }

    fn dim_y(&self) -> usize {
        self.dim
    }

    fn n_bins(&self) -> usize {
        self.dim
    }

    fn phi(&self) -> &[f64] {
        &self.phi
    }

    fn set_phi(&mut self, phi: &[f64]) -> Result<()> {
        check_dim("scalar gain set_phi", 1, phi.len())?;
        if !phi[0].is_finite() {
            return Err(Error::invalid("gain must be finite"));
        }
        self.phi[0] = phi[0];
        self.bin_s = vec![phi[0].abs(); self.dim];
        Ok(())
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("scalar gain apply", self.dim, x.len())?;
        let g = self.gain();
        Ok(x.iter().map(|&v| g * v).collect())
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.apply(y)
    }

    fn singular_values(&self) -> Vec<f64> {
        self.bin_s.clone()
    }

    fn bin_singular_values(&self) -> &[f64] {
        &self.bin_s
    }

    fn to_spectral_data(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("scalar gain to_spectral_data", self.dim, x.len())?;
        Ok(x.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    fn from_spectral_data(&self, xbar: &[Complex64]) -> Result<Vec<f64>> {
        check_dim("scalar gain from_spectral_data", self.dim, xbar.len())?;
        Ok(xbar.iter().map(|c| c.re).collect())
    }

    fn to_spectral_measurement(&self, y: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("scalar gain to_spectral_measurement", self.dim, y.len())?;
        let g = self.gain();
        if is_zero_singular(g.abs(), g.abs()) || g == 0.0 {
            return Ok(vec![Complex64::default(); self.dim]);
        }
        Ok(y.iter().map(|&v| Complex64::new(v / g, 0.0)).collect())
    }

    fn datafit_grad(&self, x: &[f64], y: &[f64], sigma_y: f64) -> Result<Vec<f64>> {
        super::check_sigma_y(sigma_y)?;
        check_dim("scalar gain datafit_grad x", self.dim, x.len())?;
        check_dim("scalar gain datafit_grad y", self.dim, y.len())?;
        let g = self.gain();
        let acc: f64 = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| (yi - g * xi) * xi)
            .sum();
        Ok(vec![acc / (sigma_y * sigma_y)])
    }
}
