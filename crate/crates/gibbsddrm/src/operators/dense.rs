//! Dense reference operator: an explicit matrix with a cached SVD.
//!
//! This is the oracle implementation the structured operators are tested
//! against. Parameters φ are the flattened (row-major) matrix entries.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

use super::{is_zero_singular, SpectralOperator};

#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
    phi: Vec<f64>,
    /// Thin-SVD factors plus a completed orthonormal data-side basis.
    u: DMatrix<f64>,      // d_y x r
    v_full: DMatrix<f64>, // d_x x d_x, first r columns are the thin V
    /// Singular values per spectral bin: descending for i < r, zero beyond.
    bin_s: Vec<f64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.is_empty() {
            return Err(Error::invalid("dense operator matrix must be non-empty"));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("dense operator entries must be finite"));
        }
        let phi = matrix.transpose().as_slice().to_vec(); // row-major flatten
        let (u, v_full, bin_s) = factorize(&matrix)?;
        Ok(Self {
            matrix,
            phi,
            u,
            v_full,
            bin_s,
        })
    }

    /// Builds from row-major entries.
    pub fn from_rows(d_y: usize, d_x: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d_y * d_x {
            return Err(Error::invalid(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                d_y * d_x,
                d_y,
                d_x,
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(d_y, d_x, entries))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Compact SVD factors `(U, s, V)` with `H = U diag(s) Vᵀ`,
    /// `U: d_y x r`, `V: d_x x r`, `r = min(d_y, d_x)`, `s` descending.
    pub fn factors(&self) -> (DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
        let r = self.u.ncols();
        let v = self.v_full.columns(0, r).into_owned();
        (
            self.u.clone(),
            DVector::from_row_slice(&self.bin_s[..r]),
            v,
        )
    }
}

/// Thin SVD (descending), then completes V to a full orthonormal basis of the
/// data space so every spectral bin — including the null space — is
/// addressable.
fn factorize(matrix: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>, Vec<f64>)> {
    let d_x = matrix.ncols();
    let svd = matrix.clone().svd(true, true);
    let u = svd.u.ok_or_else(|| Error::Numerical("SVD did not produce U".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not produce V^T".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });

    let r = order.len();
    let mut u_sorted = DMatrix::zeros(u.nrows(), r);
    let mut v_cols: Vec<DVector<f64>> = Vec::with_capacity(d_x);
    let mut bin_s = vec![0.0; d_x];
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u.column(src));
        v_cols.push(v_t.row(src).transpose());
        bin_s[dst] = svd.singular_values[src];
    }

    complete_orthonormal_basis(&mut v_cols, d_x)?;
    let mut v_full = DMatrix::zeros(d_x, d_x);
    for (j, col) in v_cols.iter().enumerate() {
        v_full.set_column(j, col);
    }
    Ok((u_sorted, v_full, bin_s))
}

/// Extends a set of orthonormal columns to a full basis of R^dim using
/// modified Gram-Schmidt with one re-orthogonalization pass.
fn complete_orthonormal_basis(cols: &mut Vec<DVector<f64>>, dim: usize) -> Result<()> {
    let mut candidate = 0usize;
    while cols.len() < dim {
        if candidate >= dim {
            return Err(Error::Numerical(
                "failed to complete orthonormal basis".into(),
            ));
        }
        let mut v: DVector<f64> = DVector::zeros(dim);
        v[candidate] = 1.0;
        candidate += 1;
        for _ in 0..2 {
            for c in cols.iter() {
                let proj = c.dot(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / norm);
        }
    }
    Ok(())
}

impl SpectralOperator for DenseOperator {
    fn dim_x(&self) -> usize {
        self.matrix.ncols()
    }

    fn dim_y(&self) -> usize {
        self.matrix.nrows()
    }

    fn n_bins(&self) -> usize {
        self.matrix.ncols()
    }

    fn phi(&self) -> &[f64] {
        &self.phi
    }

    fn set_phi(&mut self, phi: &[f64]) -> Result<()> {
        check_dim("dense set_phi", self.phi.len(), phi.len())?;
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("phi entries must be finite"));
        }
        self.matrix = DMatrix::from_row_slice(self.dim_y(), self.dim_x(), phi);
        self.phi = phi.to_vec();
        let (u, v_full, bin_s) = factorize(&self.matrix)?;
        self.u = u;
        self.v_full = v_full;
        self.bin_s = bin_s;
        Ok(())
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("dense apply", self.dim_x(), x.len())?;
        Ok((&self.matrix * DVector::from_row_slice(x)).as_slice().to_vec())
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim("dense apply_adjoint", self.dim_y(), y.len())?;
        Ok((self.matrix.transpose() * DVector::from_row_slice(y))
            .as_slice()
            .to_vec())
    }

    fn singular_values(&self) -> Vec<f64> {
        let r = self.u.ncols();
        self.bin_s[..r].to_vec()
    }

    fn bin_singular_values(&self) -> &[f64] {
        &self.bin_s
    }

    fn to_spectral_data(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("dense to_spectral_data", self.dim_x(), x.len())?;
        let xv = DVector::from_row_slice(x);
        Ok((0..self.dim_x())
            .map(|i| Complex64::new(self.v_full.column(i).dot(&xv), 0.0))
            .collect())
    }

    fn from_spectral_data(&self, xbar: &[Complex64]) -> Result<Vec<f64>> {
        check_dim("dense from_spectral_data", self.n_bins(), xbar.len())?;
        let mut out = DVector::zeros(self.dim_x());
        for (i, c) in xbar.iter().enumerate() {
            out += self.v_full.column(i) * c.re;
        }
        Ok(out.as_slice().to_vec())
    }

    fn to_spectral_measurement(&self, y: &[f64]) -> Result<Vec<Complex64>> {
        check_dim("dense to_spectral_measurement", self.dim_y(), y.len())?;
        let yv = DVector::from_row_slice(y);
        let s_max = self.operator_norm();
        let mut out = vec![Complex64::default(); self.n_bins()];
        for i in 0..self.u.ncols() {
            let s = self.bin_s[i];
            if !is_zero_singular(s, s_max) {
                out[i] = Complex64::new(self.u.column(i).dot(&yv) / s, 0.0);
            }
        }
        Ok(out)
    }

    fn datafit_grad(&self, x: &[f64], y: &[f64], sigma_y: f64) -> Result<Vec<f64>> {
        super::check_sigma_y(sigma_y)?;
        check_dim("dense datafit_grad x", self.dim_x(), x.len())?;
        check_dim("dense datafit_grad y", self.dim_y(), y.len())?;
        let hx = self.apply(x)?;
        let inv_var = 1.0 / (sigma_y * sigma_y);
        let mut grad = Vec::with_capacity(self.phi.len());
        for i in 0..self.dim_y() {
            let r = y[i] - hx[i];
            for xj in x {
                grad.push(inv_var * r * xj);
            }
        }
        Ok(grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn example() -> DenseOperator {
        DenseOperator::from_rows(2, 3, &[1.0, 2.0, 0.5, -1.0, 0.25, 3.0]).unwrap()
    }

    #[test]
    fn svd_reconstructs_matrix() {
        let op = example();
        let (u, s, v) = op.factors();
        let rebuilt = &u * DMatrix::from_diagonal(&s) * v.transpose();
        for (a, b) in rebuilt.iter().zip(op.matrix().iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn full_v_is_orthonormal() {
        let op = example();
        let gram = op.v_full.transpose() * &op.v_full;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram[(i, j)], want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spectral_round_trip_is_identity() {
        let op = example();
        let x = [0.3, -1.2, 2.0];
        let back = op.from_spectral_data(&op.to_spectral_data(&x).unwrap()).unwrap();
        for (a, b) in back.iter().zip(&x) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_values_descending_and_padded() {
        let op = example();
        let sv = op.singular_values();
        assert_eq!(sv.len(), 2);
        assert!(sv[0] >= sv[1]);
        assert_eq!(op.bin_singular_values().len(), 3);
        assert_eq!(op.bin_singular_values()[2], 0.0);
    }

    #[test]
    fn spectral_measurement_matches_pseudoinverse() {
        // Explicit 3x3 check of Σ†Uᵀy against factor arithmetic.
        let op = DenseOperator::from_rows(
            3,
            3,
            &[2.0, 0.0, 1.0, -1.0, 3.0, 0.5, 0.0, 1.0, 1.0],
        )
        .unwrap();
        let y = [1.0, -2.0, 0.5];
        let (u, s, _) = op.factors();
        let ybar = op.to_spectral_measurement(&y).unwrap();
        let yv = DVector::from_row_slice(&y);
        for i in 0..3 {
            let want = u.column(i).dot(&yv) / s[i];
            assert_abs_diff_eq!(ybar[i].re, want, epsilon = 1e-10);
            assert_eq!(ybar[i].im, 0.0);
        }
    }

    #[test]
    fn zero_residual_gives_zero_gradient() {
        let op = example();
        let x = [0.5, 1.0, -0.5];
        let y = op.apply(&x).unwrap();
        let grad = op.datafit_grad(&x, &y, 0.1).unwrap();
        for g in grad {
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn set_phi_rebuilds_factors() {
        let mut op = DenseOperator::from_rows(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(op.operator_norm(), 1.0, epsilon = 1e-12);
        op.set_phi(&[2.0, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(op.operator_norm(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(op.singular_values()[1], 0.5, epsilon = 1e-12);
    }
}
