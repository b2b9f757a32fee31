//! Restoration quality metrics.
//!
//! Circular blind deconvolution only identifies the kernel up to a circular
//! shift paired with the opposite shift of the signal, so the kernel error is
//! reported after the best circular alignment and the signal PSNR both raw
//! and after the corresponding counter-shift.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid layout for circular-shift alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDomain {
    /// Circular shifts of a length-d vector.
    OneD,
    /// Independent row/column shifts on an `h x w` grid (row-major data).
    TwoD { height: usize, width: usize },
}

/// Metric bundle for one restoration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// `10 log10(range² / MSE)`; `None` (serialized as null) when MSE = 0.
    pub psnr_db: Option<f64>,
    /// Set when the PSNR is infinite (zero MSE).
    pub psnr_infinite: bool,
    pub mse: f64,
    /// `‖φ_est − φ_ref‖ / ‖φ_ref‖` after optimal circular alignment.
    pub kernel_error_l2_normalized: f64,
    /// PSNR after counter-shifting the signal by the kernel alignment.
    pub psnr_db_aligned: Option<f64>,
}

pub fn mse(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::invalid("mse needs equal-length non-empty vectors"));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64)
}

pub fn psnr_db(mse: f64, data_range: f64) -> Option<f64> {
    if mse == 0.0 {
        None
    } else {
        Some(10.0 * (data_range * data_range / mse).log10())
    }
}

fn shifted_index(domain: ShiftDomain, len: usize, i: usize, shift: usize) -> usize {
    match domain {
        ShiftDomain::OneD => (i + len - shift) % len,
        ShiftDomain::TwoD { height, width } => {
            let (si, sj) = (shift / width, shift % width);
            let (r, c) = (i / width, i % width);
            ((r + height - si) % height) * width + ((c + width - sj) % width)
        }
    }
}

/// Finds the circular shift `a` minimizing `‖est − S_a(reference)‖`, where
/// `S_a` shifts content forward by `a`. Returns `(a, min_error / ‖reference‖)`.
pub fn align_kernel(est: &[f64], reference: &[f64], domain: ShiftDomain) -> Result<(usize, f64)> {
    if est.len() != reference.len() || est.is_empty() {
        return Err(Error::invalid("kernel alignment needs equal-length non-empty vectors"));
    }
    if let ShiftDomain::TwoD { height, width } = domain {
        if height * width != est.len() {
            return Err(Error::invalid("grid dimensions do not match the kernel length"));
        }
    }
    let d = est.len();
    let ref_norm: f64 = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    if ref_norm == 0.0 {
        return Err(Error::invalid("reference kernel must be nonzero"));
    }
    let mut best = (0usize, f64::INFINITY);
    for shift in 0..d {
        let mut acc = 0.0;
        for i in 0..d {
            let diff = est[i] - reference[shifted_index(domain, d, i, shift)];
            acc += diff * diff;
        }
        if acc < best.1 {
            best = (shift, acc);
        }
    }
    Ok((best.0, best.1.sqrt() / ref_norm))
}

/// Undoes the signal shift paired with a kernel shift of `shift`: a kernel
/// estimated as `S_shift(k_ref)` carries a signal estimated as
/// `S_{−shift}(x_ref)`, so applying `S_shift` restores the alignment.
pub fn counter_shift(signal: &[f64], shift: usize, domain: ShiftDomain) -> Vec<f64> {
    let d = signal.len();
    (0..d)
        .map(|i| signal[shifted_index(domain, d, i, shift)])
        .collect()
}

/// Computes the full metric bundle. `phi_ref`/`phi_est` are the padded
/// kernels on the signal grid when alignment is meaningful; pass the raw
/// parameter vectors otherwise (alignment then runs over their own length).
pub fn compute_metrics(
    x_ref: &[f64],
    x_est: &[f64],
    phi_ref: &[f64],
    phi_est: &[f64],
    data_range: f64,
    domain: ShiftDomain,
) -> Result<Metrics> {
    if !(data_range > 0.0) {
        return Err(Error::invalid("data_range must be positive"));
    }
    let raw_mse = mse(x_ref, x_est)?;
    let psnr = psnr_db(raw_mse, data_range);
    let (shift, kernel_error) = align_kernel(phi_est, phi_ref, domain)?;
    let psnr_aligned = if phi_ref.len() == x_ref.len() {
        let aligned = counter_shift(x_est, shift, domain);
        psnr_db(mse(x_ref, &aligned)?, data_range)
    } else {
        psnr
    };
    Ok(Metrics {
        psnr_db: psnr,
        psnr_infinite: raw_mse == 0.0,
        mse: raw_mse,
        kernel_error_l2_normalized: kernel_error,
        psnr_db_aligned: psnr_aligned,
    })
}
