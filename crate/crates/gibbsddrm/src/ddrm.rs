//! Modified DDRM conditional samplers in spectral space.
//!
//! Measurements `y = H_φ x_0 + N(0, σ_y² I)` are lifted into the operator's
//! spectral coordinates, where the chain factorizes per bin. The terminal
//! draw fills each observed bin with `N(ȳ_i, σ_T² − σ_y²/s_i²)` and each
//! unobserved bin with `N(0, σ_T²)`. Every later step blends the denoiser
//! prediction with the measurement according to how the current noise level
//! `σ_t` compares with the per-bin measurement noise `σ_y/s_i`, with
//! hyperparameters η, η_b weighting the stochastic and anchored parts.
//!
//! Noise is drawn as a standard normal in signal space and pushed through
//! `to_spectral_data`; with unitary transforms this has unit per-bin variance
//! and, for circulant operators, exactly the conjugate symmetry that keeps
//! inverse-transformed samples real.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{is_zero_singular, SpectralOperator};
use crate::priors::{Denoiser, LatentState, NoiseSchedule};

/// Hyperparameters of the modified DDRM updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DdrmParams {
    pub eta: f64,
    pub eta_b: f64,
    pub sigma_y: f64,
}

impl DdrmParams {
    pub fn new(eta: f64, eta_b: f64, sigma_y: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::invalid("eta must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&eta_b) {
            return Err(Error::invalid("eta_b must lie in [0, 1]"));
        }
        if sigma_y < 0.0 || !sigma_y.is_finite() {
            return Err(Error::invalid("sigma_y must be nonnegative and finite"));
        }
        Ok(Self { eta, eta_b, sigma_y })
    }
}

/// Which arm of the per-bin update applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinBranch {
    /// `s_i = 0`: no measurement information, denoise toward the prediction.
    Null,
    /// `σ_t < σ_y / s_i`: the measurement is noisier than the chain.
    Noisy,
    /// `σ_t ≥ σ_y / s_i`: the measurement anchors the bin.
    Anchored,
}

/// Branch selection for one bin. Exactly one branch applies for any valid
/// `(σ_t, σ_y, s, s_max)`.
pub fn bin_branch(sigma_t: f64, sigma_y: f64, s: f64, s_max: f64) -> BinBranch {
    if is_zero_singular(s, s_max) {
        BinBranch::Null
    } else if sigma_t < sigma_y / s {
        BinBranch::Noisy
    } else {
        BinBranch::Anchored
    }
}

fn spectral_noise<R: Rng + ?Sized>(
    op: &dyn SpectralOperator,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let eps: Vec<f64> = (0..op.dim_x()).map(|_| rng.sample(StandardNormal)).collect();
    op.to_spectral_data(&eps)
}

/// Draws `x_T ~ p(x_T | φ, y)`.
///
/// Bins whose variance `σ_T² − σ_y²/s_i²` would be negative carry no usable
/// measurement information at this noise level and are routed to the null
/// branch.
pub fn sample_x_terminal<R: Rng + ?Sized>(
    op: &dyn SpectralOperator,
    y: &[f64],
    schedule: &NoiseSchedule,
    params: &DdrmParams,
    rng: &mut R,
) -> Result<LatentState> {
    let t_top = schedule.t_steps();
    let sigma_t = schedule.sigma(t_top);
    let sy2 = params.sigma_y * params.sigma_y;
    let ybar = op.to_spectral_measurement(y)?;
    let s = op.bin_singular_values();
    let s_max = op.operator_norm();
    let ebar = spectral_noise(op, rng)?;

    let mut xbar = vec![Complex64::default(); op.n_bins()];
    for i in 0..op.n_bins() {
        let (mean, var) = if is_zero_singular(s[i], s_max) {
            (Complex64::default(), sigma_t * sigma_t)
        } else {
            let var = sigma_t * sigma_t - sy2 / (s[i] * s[i]);
            if var < 0.0 {
                (Complex64::default(), sigma_t * sigma_t)
            } else {
                (ybar[i], var)
            }
        };
        xbar[i] = mean + ebar[i] * var.sqrt();
    }
    Ok(LatentState {
        t: t_top,
        x: op.from_spectral_data(&xbar)?,
    })
}

/// One transition `x_t ~ p(x_t | x_{t+1}, φ, y)` together with the denoiser
/// prediction it used.
#[derive(Debug, Clone)]
pub struct XtSample {
    pub state: LatentState,
    /// `x̂_θ,t = denoiser(x_{t+1}, σ_{t+1})`.
    pub xhat: Vec<f64>,
}

/// Draws `x_t` given `x_{t+1}` via the three-branch spectral update.
pub fn sample_x_step<R: Rng + ?Sized>(
    op: &dyn SpectralOperator,
    x_next: &LatentState,
    y: &[f64],
    schedule: &NoiseSchedule,
    params: &DdrmParams,
    denoiser: &dyn Denoiser,
    rng: &mut R,
) -> Result<XtSample> {
    if x_next.t == 0 || x_next.t > schedule.t_steps() {
        return Err(Error::invalid(format!(
            "sample_x_step needs 1 <= t+1 <= T, got t+1 = {}",
            x_next.t
        )));
    }
    let t = x_next.t - 1;
    let sigma_t = schedule.sigma(t);
    let sigma_next = schedule.sigma(x_next.t);

    let xhat = denoiser.estimate(&x_next.x, sigma_next)?;
    let xhat_bar = op.to_spectral_data(&xhat)?;
    let xnext_bar = op.to_spectral_data(&x_next.x)?;
    let ybar = op.to_spectral_measurement(y)?;
    let s = op.bin_singular_values();
    let s_max = op.operator_norm();
    let ebar = spectral_noise(op, rng)?;

    let eta = params.eta;
    let eta_b = params.eta_b;
    let sigma_y = params.sigma_y;
    let drift = (1.0 - eta * eta).sqrt() * sigma_t;

    let mut xbar = vec![Complex64::default(); op.n_bins()];
    for i in 0..op.n_bins() {
        let (mean, var) = match bin_branch(sigma_t, sigma_y, s[i], s_max) {
            BinBranch::Null => (
                xhat_bar[i] + (xnext_bar[i] - xhat_bar[i]) * (drift / sigma_next),
                eta * eta * sigma_t * sigma_t,
            ),
            BinBranch::Noisy => {
                let noise_ratio = sigma_y / s[i];
                (
                    xhat_bar[i] + (ybar[i] - xhat_bar[i]) * (drift / noise_ratio),
                    eta * eta * sigma_t * sigma_t,
                )
            }
            BinBranch::Anchored => {
                let var =
                    sigma_t * sigma_t - (sigma_y * sigma_y) / (s[i] * s[i]) * eta_b * eta_b;
                (
                    xhat_bar[i] * (1.0 - eta_b) + ybar[i] * eta_b,
                    var.max(0.0),
                )
            }
        };
        xbar[i] = mean + ebar[i] * var.sqrt();
    }
    Ok(XtSample {
        state: LatentState {
            t,
            x: op.from_spectral_data(&xbar)?,
        },
        xhat,
    })
}

/// Trace density for restoration runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TraceGranularity {
    /// One record per diffusion step (after the last inner update).
    #[default]
    PerStep,
    /// One record per inner update as well.
    PerInner,
}

/// One diagnostic record: residual `‖y − H_φ x̂_θ,t‖` and the parameter
/// snapshot at that point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub cycle: usize,
    pub t: usize,
    pub inner: usize,
    pub residual: f64,
    pub phi: Vec<f64>,
    /// Cumulative denoiser evaluations when the record was taken.
    pub evals: usize,
}

/// Output of a restoration run: final samples plus diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestorationResult {
    pub x0: Vec<f64>,
    pub phi: Vec<f64>,
    pub trace: Vec<StepRecord>,
    pub denoiser_evals: usize,
    pub phi_update_calls: usize,
    /// Latent draws performed (terminal plus per-step samples).
    pub latent_samples: usize,
}

pub(crate) fn residual_norm(
    op: &dyn SpectralOperator,
    y: &[f64],
    xhat: &[f64],
) -> Result<f64> {
    let hx = op.apply(xhat)?;
    Ok(y.iter()
        .zip(&hx)
        .map(|(&yi, &hi)| (yi - hi) * (yi - hi))
        .sum::<f64>()
        .sqrt())
}

pub(crate) fn check_finite_state(
    x: &[f64],
    phi: &[f64],
    residual: f64,
    cycle: usize,
    t: usize,
    inner: usize,
) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "latent x".into(), cycle, t, inner });
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "phi".into(), cycle, t, inner });
    }
    if !residual.is_finite() {
        return Err(Error::NonFinite { what: "residual".into(), cycle, t, inner });
    }
    Ok(())
}

/// Non-blind DDRM: chains the terminal draw and `T` transitions with φ held
/// fixed. This is the with-known-operator baseline.
pub fn run_ddrm<R: Rng + ?Sized>(
    op: &dyn SpectralOperator,
    y: &[f64],
    schedule: &NoiseSchedule,
    params: &DdrmParams,
    denoiser: &dyn Denoiser,
    rng: &mut R,
) -> Result<RestorationResult> {
    let mut trace = Vec::with_capacity(schedule.t_steps());
    let mut denoiser_evals = 0;
    let mut latent_samples = 1;
    let mut state = sample_x_terminal(op, y, schedule, params, rng)?;
    for _ in 0..schedule.t_steps() {
        let sample = sample_x_step(op, &state, y, schedule, params, denoiser, rng)?;
        denoiser_evals += 1;
        latent_samples += 1;
        let residual = residual_norm(op, y, &sample.xhat)?;
        let t = sample.state.t;
        check_finite_state(&sample.state.x, op.phi(), residual, 1, t, 0)?;
        trace.push(StepRecord {
            cycle: 1,
            t,
            inner: 0,
            residual,
            phi: op.phi().to_vec(),
            evals: denoiser_evals,
        });
        state = sample.state;
    }
    Ok(RestorationResult {
        x0: state.x,
        phi: op.phi().to_vec(),
        trace,
        denoiser_evals,
        phi_update_calls: 0,
        latent_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{CirculantConvOperator, DenseOperator};
    use crate::priors::GaussianPrior;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn identity_dense(d: usize) -> DenseOperator {
        let mut e = vec![0.0; d * d];
        for i in 0..d {
            e[i * d + i] = 1.0;
        }
        DenseOperator::from_rows(d, d, &e).unwrap()
    }

    #[test]
    fn terminal_draw_noiseless_identity_shifts_with_y() {
        // With σ_y = 0 and the identity operator, x_T = y + σ_T ε: the same
        // seed with different y must shift the output by exactly Δy.
        let op = identity_dense(3);
        let schedule = NoiseSchedule::linear(4, 1.5).unwrap();
        let params = DdrmParams::new(0.8, 0.9, 0.0).unwrap();
        let y1 = [0.5, -1.0, 2.0];
        let y2 = [1.5, 0.0, 3.0];
        let a = sample_x_terminal(&op, &y1, &schedule, &params, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        let b = sample_x_terminal(&op, &y2, &schedule, &params, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(b.x[i] - a.x[i], y2[i] - y1[i], epsilon = 1e-10);
        }
        assert_eq!(a.t, 4);
    }

    #[test]
    fn terminal_null_bin_ignores_y() {
        // Kernel [0.5, 0.5] on d=2: bin 1 has s=0 and must not see y.
        let op = CirculantConvOperator::new_1d(2, &[0.5, 0.5], false).unwrap();
        let schedule = NoiseSchedule::linear(2, 1.0).unwrap();
        let params = DdrmParams::new(1.0, 1.0, 0.0).unwrap();
        let a = sample_x_terminal(&op, &[1.0, 1.0], &schedule, &params, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = sample_x_terminal(&op, &[3.0, -1.0], &schedule, &params, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let abar = op.to_spectral_data(&a.x).unwrap();
        let bbar = op.to_spectral_data(&b.x).unwrap();
        // Null bin identical across different measurements (same seed).
        assert_abs_diff_eq!(abar[1].re, bbar[1].re, epsilon = 1e-10);
        assert_abs_diff_eq!(abar[1].im, bbar[1].im, epsilon = 1e-10);
    }

    #[test]
    fn terminal_moments_match_over_many_draws() {
        let op = identity_dense(4);
        let schedule = NoiseSchedule::linear(3, 1.0).unwrap();
        let sigma_y = 0.3;
        let params = DdrmParams::new(0.8, 0.9, sigma_y).unwrap();
        let y = [0.4, -0.2, 1.1, 0.0];
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut sum = vec![0.0; 4];
        let mut sumsq = vec![0.0; 4];
        for _ in 0..n {
            let s = sample_x_terminal(&op, &y, &schedule, &params, &mut rng).unwrap();
            for i in 0..4 {
                sum[i] += s.x[i];
                sumsq[i] += s.x[i] * s.x[i];
            }
        }
        let var_exact = 1.0 - sigma_y * sigma_y; // σ_T² − σ_y²/s² with s = 1
        let se_mean = (var_exact / n as f64).sqrt();
        let se_var = var_exact * (2.0 / n as f64).sqrt();
        for i in 0..4 {
            let mean = sum[i] / n as f64;
            let var = sumsq[i] / n as f64 - mean * mean;
            assert!((mean - y[i]).abs() < 3.0 * se_mean, "bin {i}: mean {mean} vs {}", y[i]);
            assert!((var - var_exact).abs() < 3.0 * se_var, "bin {i}: var {var} vs {var_exact}");
        }
    }

    #[test]
    fn step_with_eta_one_drops_drift_term() {
        // η = 1 in the null branch: mean is exactly the prediction.
        let op = CirculantConvOperator::new_1d(2, &[0.5, 0.5], false).unwrap();
        let schedule = NoiseSchedule::linear(2, 1.0).unwrap();
        let params = DdrmParams::new(1.0, 0.9, 0.1).unwrap();
        let denoiser = GaussianPrior::centered(2, 1.0).unwrap();
        let x_next = LatentState { t: 2, x: vec![0.7, -0.4] };
        let y = [0.25, 0.25];
        // Average many draws; the null-bin mean must equal the prediction bin.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 40_000;
        let mut acc = Complex64::default();
        let mut xhat_bin = Complex64::default();
        for _ in 0..n {
            let s = sample_x_step(&op, &x_next, &y, &schedule, &params, &denoiser, &mut rng).unwrap();
            let sb = op.to_spectral_data(&s.state.x).unwrap();
            acc += sb[1];
            xhat_bin = op.to_spectral_data(&s.xhat).unwrap()[1];
        }
        let mean = acc / n as f64;
        let sigma_t = schedule.sigma(1);
        let se = 3.0 * sigma_t / (n as f64).sqrt();
        assert!((mean - xhat_bin).norm() < 3.0 * se);
    }

    #[test]
    fn step_boundary_pins_mean_to_measurement() {
        // η_b = 1 and σ_t = σ_y/s_i: anchored branch with zero variance.
        let op = identity_dense(2);
        let schedule = NoiseSchedule::from_sigmas(vec![0.0, 0.5, 1.0]).unwrap();
        let params = DdrmParams::new(0.8, 1.0, 0.5).unwrap(); // σ_y/s = 0.5 = σ_1
        let denoiser = GaussianPrior::centered(2, 1.0).unwrap();
        let x_next = LatentState { t: 2, x: vec![1.0, -1.0] };
        let y = [0.3, 0.9];
        let s = sample_x_step(
            &op,
            &x_next,
            &y,
            &schedule,
            &params,
            &denoiser,
            &mut ChaCha8Rng::seed_from_u64(2),
        )
        .unwrap();
        for (xi, yi) in s.state.x.iter().zip(&y) {
            assert_abs_diff_eq!(xi, yi, epsilon = 1e-10);
        }
        assert_eq!(s.state.t, 1);
    }

    #[test]
    fn step_rejects_t_zero_input() {
        let op = identity_dense(1);
        let schedule = NoiseSchedule::linear(2, 1.0).unwrap();
        let params = DdrmParams::new(0.5, 0.5, 0.1).unwrap();
        let denoiser = GaussianPrior::centered(1, 1.0).unwrap();
        let bad = LatentState { t: 0, x: vec![0.0] };
        let err = sample_x_step(
            &op,
            &bad,
            &[0.0],
            &schedule,
            &params,
            &denoiser,
            &mut ChaCha8Rng::seed_from_u64(0),
        );
        assert!(err.is_err());
    }

    #[test]
    fn noiseless_identity_chain_reproduces_y_exactly() {
        // σ_y = 0, identity operator, η = η_b = 1: the anchored branch pins
        // every observed bin to ȳ and the final step has zero variance.
        let op = identity_dense(3);
        let schedule = NoiseSchedule::linear(5, 1.0).unwrap();
        let params = DdrmParams::new(1.0, 1.0, 0.0).unwrap();
        let denoiser = GaussianPrior::centered(3, 1.0).unwrap();
        let y = [0.2, -0.8, 1.4];
        let res = run_ddrm(
            &op,
            &y,
            &schedule,
            &params,
            &denoiser,
            &mut ChaCha8Rng::seed_from_u64(77),
        )
        .unwrap();
        for (xi, yi) in res.x0.iter().zip(&y) {
            assert_abs_diff_eq!(xi, yi, epsilon = 1e-10);
        }
        assert_eq!(res.trace.len(), 5);
        assert_eq!(res.denoiser_evals, 5);
    }

    #[test]
    fn near_flat_prior_noiseless_identity_recovers_y() {
        let op = identity_dense(4);
        let schedule = NoiseSchedule::linear(50, 1.0).unwrap();
        let params = DdrmParams::new(0.85, 0.9, 0.0).unwrap();
        let denoiser = GaussianPrior::centered(4, 1e6).unwrap();
        let y = [0.3, -0.6, 0.9, 0.1];
        let res = run_ddrm(
            &op,
            &y,
            &schedule,
            &params,
            &denoiser,
            &mut ChaCha8Rng::seed_from_u64(3),
        )
        .unwrap();
        let rms = res
            .x0
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            / 2.0;
        assert!(rms < 1e-2, "rms deviation {rms}");
    }

    #[test]
    fn branch_partition_is_exhaustive_and_exclusive() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        use rand::Rng as _;
        for _ in 0..10_000 {
            let sigma_t: f64 = rng.random_range(0.0..2.0);
            let sigma_y: f64 = rng.random_range(0.0..1.0);
            let s: f64 = rng.random_range(0.0..2.0);
            let s_max = s.max(rng.random_range(0.0..2.0));
            let b = bin_branch(sigma_t, sigma_y, s, s_max);
            let null = is_zero_singular(s, s_max);
            let noisy = !null && sigma_t < sigma_y / s;
            let anchored = !null && !noisy;
            let matches = [
                (b == BinBranch::Null, null),
                (b == BinBranch::Noisy, noisy),
                (b == BinBranch::Anchored, anchored),
            ];
            assert!(matches.iter().all(|(got, want)| got == want));
            assert_eq!(matches.iter().filter(|(got, _)| *got).count(), 1);
        }
    }
}
