//! Complex-domain circular convolution.
//!
//! Models measurement processes of the form `y = g ⊛ x` with complex signals
//! and a complex kernel g on a declared support. Storage is real `f64` with
//! interleaved re/im pairs, so a length-n complex problem has storage
//! dimension 2n and n complex spectral bins. Viewed as a real-linear map on
//! R^{2n}, multiplication by `ĝ_k` in bin k is a rotation-scaling whose two
//! singular values both equal `|ĝ_k|`.
//!
//! Parameters φ interleave re/im of the support taps.

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

use super::fft::UnitaryFft;
use super::{is_zero_singular, SpectralOperator};

#[derive(Clone, Debug)]
pub struct ComplexCirculantOperator {
    fft: UnitaryFft,
    support: usize,
    /// Interleaved re/im taps, length `2 * support`.
    phi: Vec<f64>,
    transfer: Vec<Complex64>,
    bin_s: Vec<f64>,
}

fn interleaved_to_complex(data: &[f64]) -> Vec<Complex64> {
    data.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

fn complex_to_interleaved(data: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(data.len() * 2);
    for c in data {
        out.push(c.re);
        out.push(c.im);
    }
    out
}

impl ComplexCirculantOperator {
    /// `n`: number of complex samples; `taps`: interleaved re/im support taps.
    pub fn new(n: usize, taps: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("signal length must be positive"));
        }
        if taps.is_empty() || taps.len() % 2 != 0 {
            return Err(Error::invalid(
                "complex kernel taps must be non-empty interleaved re/im pairs",
            ));
        }
        let support = taps.len() / 2;
        if support > n {
            return Err(Error::invalid("kernel support must not exceed the signal length"));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("kernel taps must be finite"));
        }
        let mut op = Self {
            fft: UnitaryFft::new(n),
            support,
            phi: taps.to_vec(),
            transfer: Vec::new(),
            bin_s: Vec::new(),
        };
        op.rebuild();
        Ok(op)
    }

    fn n(&self) -> usize {
        self.fft.len()
    }

    fn rebuild(&mut self) {
        let n = self.n();
        let mut buf = vec![Complex64::default(); n];
        for (b, t) in buf.iter_mut().zip(interleaved_to_complex(&self.phi)) {
            *b = t;
        }
        self.fft.forward(&mut buf);
        let scale = (n as f64).sqrt();
        for v in buf.iter_mut() {
            *v *= scale;
        }
        self.bin_s = buf.iter().map(|c| c.norm()).collect();
        self.transfer = buf;
    }

    pub fn transfer_fn(&self) -> &[Complex64] {
        &self.transfer
    }

    /// Materializes the real 2n x 2n matrix (test-scale only).
    pub fn to_dense(&self) -> Result<super::DenseOperator> {
        let d = self.dim_x();
        let mut entries = vec![0.0; d * d];
        let mut basis = vec![0.0; d];
        for j in 0..d {
            basis[j] = 1.0;
            let col = self.apply(&basis)?;
            basis[j] = 0.0;
            for i in 0..d {
                entries[i * d + j] = col[i];
            }
        }
        super::DenseOperator::from_rows(d, d, &entries)
    }

    fn convolve(&self, x: &[f64], conjugate: bool) -> Vec<f64> {
        let mut buf = interleaved_to_complex(x);
        self.fft.forward(&mut buf);
        for (b, g) in buf.iter_mut().zip(&self.transfer) {
            *b *= if conjugate { g.conj() } else { *g };
        }
        self.fft.inverse(&mut buf);
        complex_to_interleaved(&buf)
    }
}

impl SpectralOperator for ComplexCirculantOperator {
    fn dim_x(&self) -> usize {
        2 * self.n()
    }

    fn dim_y(&self) -> usize {
        2 * self.n()
    }

    fn n_bins(&self) -> usize {
        self.n()
    }

    fn phi(&self) -> &[f64] {
        &self.phi
    }

    fn set_phi(&mut self, phi: &[f64]) -> Result<()> {
        check_dim("complex circulant set_phi", 2 * self.support, phi.len())?;
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("phi entries must be finite"));
        }
        self.phi = phi.to_vec();
        self.rebuild();
        Ok(())
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("complex circulant apply", self.dim_x(), x.len())?;
        Ok(self.convolve(x, false))
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim("complex circulant apply_adjoint", self.dim_y(), y.len())?;
        Ok(self.convolve(y, true))
    }

    fn singular_values(&self) -> Vec<f64> {
        // Each complex bin contributes two equal real-space singular values.
        let mut sv = Vec::with_capacity(2 * self.bin_s.len());
        for &s in &self.bin_s {
            sv.push(s);
            sv.push(s);
        }
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    fn bin_singular_values(&self) -> &[f64] {
        &self.bin_s
    }

    fn to_spectral_data(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("complex circulant to_spectral_data", self.dim_x(), x.len())?;
        let mut buf = interleaved_to_complex(x);
        self.fft.forward(&mut buf);
        Ok(buf)
    }

    fn from_spectral_data(&self, xbar: &[Complex64]) -> Result<Vec<f64>> {
        check_dim("complex circulant from_spectral_data", self.n_bins(), xbar.len())?;
        let mut buf = xbar.to_vec();
        self.fft.inverse(&mut buf);
        Ok(complex_to_interleaved(&buf))
    }

    fn to_spectral_measurement(&self, y: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("complex circulant to_spectral_measurement", self.dim_y(), y.len())?;
        let mut buf = interleaved_to_complex(y);
        self.fft.forward(&mut buf);
        let s_max = self.operator_norm();
        for (b, g) in buf.iter_mut().zip(&self.transfer) {
            if is_zero_singular(g.norm(), s_max) {
                *b = Complex64::default();
            } else {
                *b /= *g;
            }
        }
        Ok(buf)
    }

    /// Complex cross-correlation of the residual with the data on the
    /// support: with `c_l = Σ_i r_i conj(x_{i−l})`, the gradient pairs are
    /// `(Re c_l, Im c_l) / σ²`.
    fn datafit_grad(&self, x: &[f64], y: &[f64], sigma_y: f64) -> Result<Vec<f64>> {
        super::check_sigma_y(sigma_y)?;
        check_dim("complex circulant datafit_grad x", self.dim_x(), x.len())?;
        check_dim("complex circulant datafit_grad y", self.dim_y(), y.len())?;
        let hx = self.apply(x)?;
        let n = self.n();
        let inv_var = 1.0 / (sigma_y * sigma_y);
        let xc = interleaved_to_complex(x);
        let rc: Vec<Complex64> = y
            .chunks_exact(2)
            .zip(hx.chunks_exact(2))
            .map(|(yi, hi)| Complex64::new(yi[0] - hi[0], yi[1] - hi[1]))
            .collect();
        let mut grad = Vec::with_capacity(2 * self.support);
        for l in 0..self.support {
            let mut acc = Complex64::default();
            for i in 0..n {
                acc += rc[i] * xc[(i + n - l) % n].conj();
            }
            grad.push(inv_var * acc.re);
            grad.push(inv_var * acc.im);
        }
        Ok(grad)
    }
}
