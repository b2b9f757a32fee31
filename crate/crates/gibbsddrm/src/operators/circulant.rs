//! Circular convolution operators diagonalized by the DFT.
//!
//! For a real kernel k padded to the signal grid, `H x = k ⊛ x` (circular)
//! factors as `H = Fᴴ diag(ĝ) F` with `ĝ` the unnormalized DFT of the padded
//! kernel and `F` the unitary DFT. Writing `ĝ_k = s_k e^{iθ_k}` gives the SVD
//! `U = Fᴴ diag(e^{iθ})`, `Σ = diag(s)`, `V = Fᴴ`, so singular values are the
//! transfer-function magnitudes and all spectral arithmetic happens per
//! complex bin. Real kernels make `ĝ` conjugate-symmetric, which keeps
//! inverse-transformed samples real.
//!
//! Parameters φ are the kernel taps on a fixed, declared support; the rest of
//! the padded kernel is zero and the data-fit gradient is computed on the
//! support only.

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

use super::fft::{transfer_from_real_kernel, transfer_from_real_kernel_2d, UnitaryFft, UnitaryFft2};
use super::{is_zero_singular, project_kernel_simplex, SpectralOperator};

#[derive(Clone, Debug)]
enum Grid {
    OneD { fft: UnitaryFft },
    TwoD { fft: UnitaryFft2, height: usize, width: usize },
}

/// Kernel support layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    /// Taps at indices `0..len`.
    OneD { len: usize },
    /// A `height x width` block at the grid origin, row-major taps.
    TwoD { height: usize, width: usize },
}

impl Support {
    fn n_taps(&self) -> usize {
        match *self {
            Support::OneD { len } => len,
            Support::TwoD { height, width } => height * width,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CirculantConvOperator {
    grid: Grid,
    support: Support,
    taps: Vec<f64>,
    simplex: bool,
    transfer: Vec<Complex64>,
    bin_s: Vec<f64>,
}

impl CirculantConvOperator {
    /// 1-D circular convolution on a length-`d` signal.
    ///
    /// With `simplex` enabled the kernel is projected onto the probability
    /// simplex at construction and `project_phi` keeps it there.
    pub fn new_1d(d: usize, taps: &[f64], simplex: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("signal length must be positive"));
        }
        if taps.is_empty() || taps.len() > d {
            return Err(Error::invalid(
                "kernel support must be non-empty and no longer than the signal",
            ));
        }
        Self::build(
            Grid::OneD { fft: UnitaryFft::new(d) },
            Support::OneD { len: taps.len() },
            taps,
            simplex,
        )
    }

    /// 2-D circular convolution on an `h x w` grid with a `kh x kw` kernel
    /// block (row-major taps).
    pub fn new_2d(h: usize, w: usize, kh: usize, kw: usize, taps: &[f64], simplex: bool) -> Result<Self> {
        if h == 0 || w == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        if kh == 0 || kw == 0 || kh > h || kw > w {
            return Err(Error::invalid("kernel block must be non-empty and fit the grid"));
        }
        if taps.len() != kh * kw {
            return Err(Error::invalid(format!(
                "expected {} taps for a {}x{} kernel, got {}",
                kh * kw,
                kh,
                kw,
                taps.len()
            )));
        }
        Self::build(
            Grid::TwoD { fft: UnitaryFft2::new(h, w), height: h, width: w },
            Support::TwoD { height: kh, width: kw },
            taps,
            simplex,
        )
    }

    fn build(grid: Grid, support: Support, taps: &[f64], simplex: bool) -> Result<Self> {
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("kernel taps must be finite"));
        }
        let taps = if simplex {
            project_kernel_simplex(taps)
        } else {
            taps.to_vec()
        };
        let mut op = Self {
            grid,
            support,
            taps,
            simplex,
            transfer: Vec::new(),
            bin_s: Vec::new(),
        };
        op.rebuild();
        Ok(op)
    }

    fn rebuild(&mut self) {
        self.transfer = match (&self.grid, self.support) {
            (Grid::OneD { fft }, Support::OneD { .. }) => {
                transfer_from_real_kernel(&self.taps, fft.len(), fft)
            }
            (Grid::TwoD { fft, .. }, Support::TwoD { height, width }) => {
                transfer_from_real_kernel_2d(&self.taps, height, width, fft)
            }
            _ => unreachable!("grid/support dimensionality always matches"),
        };
        self.bin_s = self.transfer.iter().map(|c| c.norm()).collect();
    }

    /// The transfer function `ĝ` (unnormalized DFT of the padded kernel);
    /// together with the DFT this is the operator's implicit SVD.
    pub fn transfer_fn(&self) -> &[Complex64] {
        &self.transfer
    }

    /// Kernel zero-padded to the full grid.
    pub fn padded_kernel(&self) -> Vec<f64> {
        let d = self.dim_x();
        let mut out = vec![0.0; d];
        match (self.support, &self.grid) {
            (Support::OneD { len }, _) => out[..len].copy_from_slice(&self.taps),
            (Support::TwoD { height: kh, width: kw }, Grid::TwoD { width, .. }) => {
                for a in 0..kh {
                    for b in 0..kw {
                        out[a * width + b] = self.taps[a * kw + b];
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn simplex_enabled(&self) -> bool {
        self.simplex
    }

    /// Materializes the dense matrix (test-scale only).
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

    fn fft_forward(&self, buf: &mut [Complex64]) {
        match &self.grid {
            Grid::OneD { fft } => fft.forward(buf),
            Grid::TwoD { fft, .. } => fft.forward(buf),
        }
    }

    fn fft_inverse(&self, buf: &mut [Complex64]) {
        match &self.grid {
            Grid::OneD { fft } => fft.inverse(buf),
            Grid::TwoD { fft, .. } => fft.inverse(buf),
        }
    }

    fn multiply_spectrum(&self, x: &[f64], conjugate: bool) -> Vec<f64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft_forward(&mut buf);
        for (b, g) in buf.iter_mut().zip(&self.transfer) {
            *b *= if conjugate { g.conj() } else { *g };
        }
        self.fft_inverse(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }
}

impl SpectralOperator for CirculantConvOperator {
    fn dim_x(&self) -> usize {
        match &self.grid {
            Grid::OneD { fft } => fft.len(),
            Grid::TwoD { height, width, .. } => height * width,
        }
    }

    fn dim_y(&self) -> usize {
        self.dim_x()
    }

    fn n_bins(&self) -> usize {
        self.dim_x()
    }

    fn phi(&self) -> &[f64] {
        &self.taps
    }

    fn set_phi(&mut self, phi: &[f64]) -> Result<()> {
        check_dim("circulant set_phi", self.support.n_taps(), phi.len())?;
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("phi entries must be finite"));
        }
        self.taps = phi.to_vec();
        self.rebuild();
        Ok(())
    }

    fn project_phi(&self, phi: &mut [f64]) {
        if self.simplex {
            let projected = project_kernel_simplex(phi);
            phi.copy_from_slice(&projected);
        }
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("circulant apply", self.dim_x(), x.len())?;
        Ok(self.multiply_spectrum(x, false))
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim("circulant apply_adjoint", self.dim_y(), y.len())?;
        Ok(self.multiply_spectrum(y, true))
    }

    fn singular_values(&self) -> Vec<f64> {
        let mut sv = self.bin_s.clone();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    fn bin_singular_values(&self) -> &[f64] {
        &self.bin_s
    }

    fn to_spectral_data(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("circulant to_spectral_data", self.dim_x(), x.len())?;
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft_forward(&mut buf);
        Ok(buf)
    }

    fn from_spectral_data(&self, xbar: &[Complex64]) -> Result<Vec<f64>> {
        check_dim("circulant from_spectral_data", self.n_bins(), xbar.len())?;
        let mut buf = xbar.to_vec();
        self.fft_inverse(&mut buf);
        Ok(buf.iter().map(|c| c.re).collect())
    }

    fn to_spectral_measurement(&self, y: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("circulant to_spectral_measurement", self.dim_y(), y.len())?;
        let mut buf: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft_forward(&mut buf);
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

    /// Cross-correlation of the residual with the data, restricted to the
    /// kernel support: `∂/∂k_l [−‖y − k⊛x‖²/(2σ²)] = Σ_i r_i x_{i−l} / σ²`.
    fn datafit_grad(&self, x: &[f64], y: &[f64], sigma_y: f64) -> Result<Vec<f64>> {
        super::check_sigma_y(sigma_y)?;
        check_dim("circulant datafit_grad x", self.dim_x(), x.len())?;
        check_dim("circulant datafit_grad y", self.dim_y(), y.len())?;
        let hx = self.apply(x)?;
        let inv_var = 1.0 / (sigma_y * sigma_y);
        let residual: Vec<f64> = y.iter().zip(&hx).map(|(&yi, &hi)| yi - hi).collect();

        match (self.support, &self.grid) {
            (Support::OneD { len }, Grid::OneD { fft }) => {
                let d = fft.len();
                let mut grad = vec![0.0; len];
                for (l, g) in grad.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for i in 0..d {
                        acc += residual[i] * x[(i + d - l) % d];
                    }
                    *g = inv_var * acc;
                }
                Ok(grad)
            }
            (Support::TwoD { height: kh, width: kw }, Grid::TwoD { height, width, .. }) => {
                let (h, w) = (*height, *width);
                let mut grad = vec![0.0; kh * kw];
                for a in 0..kh {
                    for b in 0..kw {
                        let mut acc = 0.0;
                        for i in 0..h {
                            let xi = (i + h - a) % h;
                            for j in 0..w {
                                let xj = (j + w - b) % w;
                                acc += residual[i * w + j] * x[xi * w + xj];
                            }
                        }
                        grad[a * kw + b] = inv_var * acc;
                    }
                }
                Ok(grad)
            }
            _ => unreachable!(),
        }
    }
}
