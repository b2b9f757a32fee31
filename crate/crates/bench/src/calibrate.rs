//! Calibration runs: measure the desk-scale quantities the acceptance gates
//! depend on and emit them as a committed constants file, together with the
//! recipe that regenerates them.

use serde::{Deserialize, Serialize};

use gibbsddrm::ddrm::{run_ddrm, DdrmParams};
use gibbsddrm::operators::DenseOperator;
use gibbsddrm::oracle::exact_gaussian_posterior;
use gibbsddrm::priors::{GaussianPrior, NoiseSchedule};
use rand_distr::{Distribution, Normal};

use crate::harness::{self, median_evals};
use crate::problem::{stream, STREAM_PROBLEM};


/// The linear-Gaussian fidelity experiment behind the DDRM acceptance gate:
/// mean of `runs` restorations, its ground-truth MSE relative to the analytic
/// MMSE estimator's error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DdrmFidelity {
    pub runs: usize,
    pub mse_mean_estimate: f64,
    pub mse_mmse: f64,
    pub ratio: f64,
}

pub fn ddrm_fidelity_experiment(runs: usize) -> anyhow::Result<DdrmFidelity> {
    let d = 8;
    let mut entries = vec![0.0; d * d];
    for i in 0..d {
        entries[i * d + i] = 1.0;
    }
    let op = DenseOperator::from_rows(d, d, &entries)?;
    let prior = GaussianPrior::centered(d, 1.0)?;
    let sigma_y = 0.4;
    let params = DdrmParams::new(0.85, 0.9, sigma_y)?;
    let schedule = NoiseSchedule::linear(20, 2.0)?;

    let mut rng = stream(20260101, STREAM_PROBLEM);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let x_true: Vec<f64> = (0..d).map(|_| normal.sample(&mut rng)).collect();
    let y: Vec<f64> = x_true.iter().map(|&v| v + sigma_y * normal.sample(&mut rng)).collect();

    let (post_mean, _) = exact_gaussian_posterior(&prior, &op, &y, sigma_y)?;
    let mse = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, z)| (x - z) * (x - z)).sum::<f64>() / a.len() as f64
    };
    let mse_mmse = mse(post_mean.as_slice(), &x_true);

    let mut mean = vec![0.0; d];
    for _ in 0..runs {
        let res = run_ddrm(&op, &y, &schedule, &params, &prior, &mut rng)?;
        for (m, v) in mean.iter_mut().zip(&res.x0) {
            *m += v / runs as f64;
        }
    }
    let mse_mean_estimate = mse(&mean, &x_true);
    Ok(DdrmFidelity {
        runs,
        mse_mean_estimate,
        mse_mmse,
        ratio: mse_mean_estimate / mse_mmse,
    })
}

/// The committed constants document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constants {
    pub recipe: String,
    /// Acceptance band for the DDRM-vs-MMSE error ratio.
    pub ddrm_mse_relative_band: f64,
    pub ddrm_fidelity: DdrmFidelity,
    pub bench: BenchConstants,
    pub efficiency: EfficiencyConstants,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConstants {
    pub n_seeds: usize,
    pub comparison_reps: usize,
    pub langevin_step_size: f64,
    pub langevin_n_steps: f64,
    pub kernel_halving_threshold: f64,
    pub required_combined_rate: f64,
    pub required_nonblind_rate: f64,
    pub observed_combined_successes: usize,
    pub observed_beats_pinv: usize,
    pub observed_nonblind_upper_bounds: usize,
    pub observed_median_error_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EfficiencyConstants {
    pub n_seeds: usize,
    pub observed_gibbs_median_evals: Option<usize>,
    pub observed_blocked_median_evals: Option<usize>,
}

pub fn run_calibration(bench_seeds: u64, efficiency_seeds: u64) -> anyhow::Result<Constants> {
    let fidelity = ddrm_fidelity_experiment(2000)?;
    let config = harness::bench_pcgs_config();
    let reps = 3usize;
    let summary = harness::run_bench_suite(0..bench_seeds, reps)?;

    let mut gibbs = Vec::new();
    let mut blocked = Vec::new();
    for seed in 0..efficiency_seeds {
        let outcome = harness::run_efficiency_seed(seed)?;
        gibbs.push(outcome.gibbs_evals);
        blocked.push(outcome.blocked_evals);
    }

    Ok(Constants {
        recipe: format!(
            "gibbsddrm calibrate --bench-seeds {bench_seeds} --efficiency-seeds {efficiency_seeds}; \
             deterministic given the committed suite (problem stream {STREAM_PROBLEM_DOC}, chain stream 2)",
            STREAM_PROBLEM_DOC = STREAM_PROBLEM,
        ),
        ddrm_mse_relative_band: 0.25,
        ddrm_fidelity: fidelity,
        bench: BenchConstants {
            n_seeds: summary.n_seeds,
            comparison_reps: reps,
            langevin_step_size: config.langevin.step_size,
            langevin_n_steps: config.langevin.n_steps as f64,
            kernel_halving_threshold: 0.5,
            required_combined_rate: 0.8,
            required_nonblind_rate: 0.9,
            observed_combined_successes: summary.combined_successes,
            observed_beats_pinv: summary.beats_pinv,
            observed_nonblind_upper_bounds: summary.nonblind_upper_bounds,
            observed_median_error_ratio: summary.median_error_ratio,
        },
        efficiency: EfficiencyConstants {
            n_seeds: efficiency_seeds as usize,
            observed_gibbs_median_evals: median_evals(&gibbs),
            observed_blocked_median_evals: median_evals(&blocked),
        },
    })
}
