//! Data-fit gradients against central finite differences, across every
//! operator variant.

use gibbsddrm::operators::{
    CirculantConvOperator, ComplexCirculantOperator, DenseOperator, ScalarGainOperator,
    SpectralOperator,
};
use gibbsddrm::oracle::finite_difference_grad;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn datafit(op: &mut dyn SpectralOperator, phi: &[f64], x: &[f64], y: &[f64], sigma_y: f64) -> f64 {
    op.set_phi(phi).unwrap();
    let hx = op.apply(x).unwrap();
    let ss: f64 = y.iter().zip(&hx).map(|(&yi, &hi)| (yi - hi) * (yi - hi)).sum();
    -0.5 * ss / (sigma_y * sigma_y)
}

fn check_against_fd(op: &mut dyn SpectralOperator, x: &[f64], y: &[f64], sigma_y: f64, tag: &str) {
    let phi0 = op.phi().to_vec();
    let analytic = op.datafit_grad(x, y, sigma_y).unwrap();
    let numeric = finite_difference_grad(
        |phi| Ok(datafit(op, phi, x, y, sigma_y)),
        &phi0,
        1e-6,
    )
    .unwrap();
    op.set_phi(&phi0).unwrap();
    let scale = numeric
        .iter()
        .map(|g| g.abs())
        .fold(1.0, f64::max);
    for (i, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
        let rel = (a - n).abs() / scale;
        assert!(rel < 1e-5, "{tag}: component {i}: analytic {a}, fd {n}, rel {rel}");
    }
}

fn randn(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).unwrap();
    (0..n).map(|_| normal.sample(rng)).collect()
}

#[test]
fn dense_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..25 {
        let d_y = rng.random_range(1..=4);
        let d_x = rng.random_range(1..=4);
        let entries = randn(&mut rng, d_y * d_x);
        let mut op = DenseOperator::from_rows(d_y, d_x, &entries).unwrap();
        let x = randn(&mut rng, d_x);
        let y = randn(&mut rng, d_y);
        let sigma_y = rng.random_range(0.2..1.5);
        check_against_fd(&mut op, &x, &y, sigma_y, "dense");
    }
}

#[test]
fn circulant_1d_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..25 {
        let d = rng.random_range(4..=24);
        let support = rng.random_range(1..=d.min(6));
        let taps = randn(&mut rng, support);
        let mut op = CirculantConvOperator::new_1d(d, &taps, false).unwrap();
        let x = randn(&mut rng, d);
        let y = randn(&mut rng, d);
        let sigma_y = rng.random_range(0.2..1.5);
        check_against_fd(&mut op, &x, &y, sigma_y, "circulant-1d");
    }
}

#[test]
fn circulant_2d_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..10 {
        let h = rng.random_range(3..=6);
        let w = rng.random_range(3..=6);
        let kh = rng.random_range(1..=2);
        let kw = rng.random_range(1..=3.min(w));
        let taps = randn(&mut rng, kh * kw);
        let mut op = CirculantConvOperator::new_2d(h, w, kh, kw, &taps, false).unwrap();
        let x = randn(&mut rng, h * w);
        let y = randn(&mut rng, h * w);
        let sigma_y = rng.random_range(0.2..1.5);
        check_against_fd(&mut op, &x, &y, sigma_y, "circulant-2d");
    }
}

#[test]
fn complex_circulant_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..15 {
        let n = rng.random_range(3..=12);
        let support = rng.random_range(1..=n.min(4));
        let taps = randn(&mut rng, 2 * support);
        let mut op = ComplexCirculantOperator::new(n, &taps).unwrap();
        let x = randn(&mut rng, 2 * n);
        let y = randn(&mut rng, 2 * n);
        let sigma_y = rng.random_range(0.2..1.5);
        check_against_fd(&mut op, &x, &y, sigma_y, "complex-circulant");
    }
}

#[test]
fn scalar_gain_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..10 {
        let d = rng.random_range(1..=5);
        let mut op = ScalarGainOperator::new(d, rng.random_range(-2.0..2.0)).unwrap();
        let x = randn(&mut rng, d);
        let y = randn(&mut rng, d);
        let sigma_y = rng.random_range(0.2..1.5);
        check_against_fd(&mut op, &x, &y, sigma_y, "scalar-gain");
    }
}

#[test]
fn gradient_rejects_nonpositive_sigma() {
    let op = ScalarGainOperator::new(2, 1.0).unwrap();
    assert!(op.datafit_grad(&[1.0, 1.0], &[1.0, 1.0], 0.0).is_err());
    assert!(op.datafit_grad(&[1.0, 1.0], &[1.0, 1.0], -0.5).is_err());
}
