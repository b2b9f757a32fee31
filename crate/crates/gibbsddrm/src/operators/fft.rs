//! Unitary DFT helpers shared by the circulant operators.
//!
//! rustfft computes unnormalized transforms; everything here rescales by
//! 1/√N so that forward and inverse are mutual inverses and both preserve
//! the l2 norm. Spectral-space code relies on that unitarity.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Cached forward/inverse plans for one transform length.
#[derive(Clone)]
pub(crate) struct UnitaryFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl UnitaryFft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            scale: 1.0 / (len as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }
}

impl std::fmt::Debug for UnitaryFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitaryFft").field("len", &self.len()).finish()
    }
}

/// Row-column 2-D unitary DFT on row-major data.
#[derive(Clone, Debug)]
pub(crate) struct UnitaryFft2 {
    rows: UnitaryFft,
    cols: UnitaryFft,
    height: usize,
    width: usize,
}

impl UnitaryFft2 {
    pub fn new(height: usize, width: usize) -> Self {
        Self {
            rows: UnitaryFft::new(width),
            cols: UnitaryFft::new(height),
            height,
            width,
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    fn transform(&self, data: &mut [Complex64], fwd: bool) {
        assert_eq!(data.len(), self.height * self.width);
        for row in data.chunks_exact_mut(self.width) {
            if fwd {
                self.rows.forward(row);
            } else {
                self.rows.inverse(row);
            }
        }
        let mut col = vec![Complex64::default(); self.height];
        for j in 0..self.width {
            for i in 0..self.height {
                col[i] = data[i * self.width + j];
            }
            if fwd {
                self.cols.forward(&mut col);
            } else {
                self.cols.inverse(&mut col);
            }
            for i in 0..self.height {
                data[i * self.width + j] = col[i];
            }
        }
    }
}

/// Unnormalized DFT of a real kernel padded to length `len` (the circulant
/// transfer function).
pub(crate) fn transfer_from_real_kernel(taps: &[f64], len: usize, fft: &UnitaryFft) -> Vec<Complex64> {
    let mut buf = vec![Complex64::default(); len];
    for (b, &t) in buf.iter_mut().zip(taps) {
        *b = Complex64::new(t, 0.0);
    }
    fft.forward(&mut buf);
    let n = (len as f64).sqrt();
    for v in buf.iter_mut() {
        *v *= n;
    }
    buf
}

/// Unnormalized 2-D DFT of a real kernel block placed at the grid origin.
pub(crate) fn transfer_from_real_kernel_2d(
    taps: &[f64],
    kh: usize,
    kw: usize,
    fft: &UnitaryFft2,
) -> Vec<Complex64> {
    let (h, w) = (fft.height, fft.width);
    let mut buf = vec![Complex64::default(); h * w];
    for a in 0..kh {
        for b in 0..kw {
            buf[a * w + b] = Complex64::new(taps[a * kw + b], 0.0);
        }
    }
    fft.forward(&mut buf);
    let n = ((h * w) as f64).sqrt();
    for v in buf.iter_mut() {
        *v *= n;
    }
    buf
}
