use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use gibbsddrm::metrics::{compute_metrics, ShiftDomain};
use gibbsddrm::operators::SpectralOperator;
use gibbsddrm::oracle::{tv_distance_1d, Binning, ToyModel, ToyOperator, ToyPrior};
use gibbsddrm::pcgs::reference::{run_reference_sampler, SamplerVariant};
use gibbsddrm::pcgs::trimming::four_variable_example;
use gibbsddrm::priors::{GaussianPrior, NoiseSchedule};

use gibbsddrm_bench::config::{ExperimentConfig, RunMode};
use gibbsddrm_bench::problem::{self, padded_kernel_error, stream, STREAM_PROBLEM};
use gibbsddrm_bench::{calibrate, formats, harness, plot, schema};

/// Blind linear inverse problems with a diffusion-restoration Gibbs sampler.
#[derive(Parser)]
#[command(name = "gibbsddrm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic problem (signal, kernel, measurement, manifest).
    Generate {
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the generation seed (default: first entry of `seeds`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run restoration for every configured seed.
    Restore {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the sampler mode.
        #[arg(long, value_enum)]
        mode: Option<RunMode>,
        /// Run a single seed instead of the configured list.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recompute metrics from stored arrays (the independent checker).
    Metrics {
        #[arg(long)]
        x_ref: PathBuf,
        #[arg(long)]
        x_est: PathBuf,
        #[arg(long)]
        kernel_ref: PathBuf,
        #[arg(long)]
        kernel_est: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        data_range: f64,
        /// Interpret vectors on an HxW grid (e.g. "8x8") for 2-D alignment.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Run the calibration experiments and write the constants file.
    Calibrate {
        #[arg(long, default_value = "calibration/constants.json")]
        out: PathBuf,
        #[arg(long, default_value_t = 50)]
        bench_seeds: u64,
        #[arg(long, default_value_t = 20)]
        efficiency_seeds: u64,
    },
    /// Run the exact-conditional reference samplers on the toy model and
    /// report stationarity statistics plus the trimming-validator demo.
    ReferenceSamplers {
        #[arg(long, default_value_t = 20000)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_validated(path: &Path) -> anyhow::Result<Result<ExperimentConfig, ExitCode>> {
    let config = ExperimentConfig::load(path)?;
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return Ok(Err(ExitCode::from(2)));
    }
    Ok(Ok(config))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate { config, out, seed } => {
            let mut config = match load_validated(&config)? {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            if let Some(out) = out {
                config.out_dir = out;
            }
            let seed = seed.unwrap_or(config.seeds[0]);
            generate_cmd(&config, seed)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Restore { config, out, mode, seed } => {
            let mut config = match load_validated(&config)? {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            if let Some(out) = out {
                config.out_dir = out;
            }
            if let Some(mode) = mode {
                config.mode = mode;
            }
            if let Some(seed) = seed {
                config.seeds = vec![seed];
            }
            if let Err(e) = config.validate() {
                eprintln!("error: {e}");
                return Ok(ExitCode::from(2));
            }
            restore_cmd(&config)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Metrics { x_ref, x_est, kernel_ref, kernel_est, data_range, grid } => {
            let x_ref = formats::read_csv_real(&x_ref)?;
            let x_est = formats::read_csv_real(&x_est)?;
            let k_ref = formats::read_csv_real(&kernel_ref)?;
            let k_est = formats::read_csv_real(&kernel_est)?;
            let domain = match grid {
                None => ShiftDomain::OneD,
                Some(spec) => {
                    let (h, w) = spec
                        .split_once('x')
                        .context("grid must look like HxW")?;
                    ShiftDomain::TwoD { height: h.parse()?, width: w.parse()? }
                }
            };
            let dim = x_ref.len();
            let pad = |k: &[f64]| {
                let mut p = vec![0.0; dim];
                p[..k.len()].copy_from_slice(k);
                p
            };
            let metrics =
                compute_metrics(&x_ref, &x_est, &pad(&k_ref), &pad(&k_est), data_range, domain)?;
            println!("{}", serde_json::to_string_pretty(&metrics)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Calibrate { out, bench_seeds, efficiency_seeds } => {
            let constants = calibrate::run_calibration(bench_seeds, efficiency_seeds)?;
            let doc = serde_json::to_value(&constants)?;
            schema::validate_constants(&doc)
                .map_err(|e| anyhow::anyhow!("emitted constants invalid: {e:?}"))?;
            if let Some(parent) = out.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&out, serde_json::to_string_pretty(&constants)?)?;
            println!("calibration written to {}", out.display());
            println!(
                "  ddrm fidelity ratio: {:.4} (band {})",
                constants.ddrm_fidelity.ratio, constants.ddrm_mse_relative_band
            );
            println!(
                "  bench: combined {}/{}, beats-pinv {}/{}, nonblind {}/{}",
                constants.bench.observed_combined_successes,
                constants.bench.n_seeds,
                constants.bench.observed_beats_pinv,
                constants.bench.n_seeds,
                constants.bench.observed_nonblind_upper_bounds,
                constants.bench.n_seeds
            );
            println!(
                "  efficiency medians: gibbs {:?}, blocked {:?}",
                constants.efficiency.observed_gibbs_median_evals,
                constants.efficiency.observed_blocked_median_evals
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::ReferenceSamplers { sweeps, seed } => {
            reference_samplers_cmd(sweeps, seed)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn generate_cmd(config: &ExperimentConfig, seed: u64) -> anyhow::Result<()> {
    std::fs::create_dir_all(&config.out_dir)?;
    let mut rng = stream(seed, STREAM_PROBLEM);
    let problem = problem::generate(
        &config.problem.signal,
        &config.prior,
        config.problem.dim,
        &config.problem.kernel,
        config.problem.sigma_y,
        &mut rng,
    )?;
    let dir = &config.out_dir;
    formats::write_csv_real(&dir.join("x_true.csv"), &problem.x_true)?;
    formats::write_csv_real(&dir.join("kernel.csv"), &problem.kernel_true)?;
    formats::write_csv_real(&dir.join("y.csv"), &problem.y)?;
    if let Some((h, w)) = problem.grid {
        formats::write_pgm(&dir.join("x_true.pgm"), w, h, &problem.x_true)?;
    }
    let manifest = serde_json::json!({
        "seed": seed,
        "dim": problem.x_true.len(),
        "grid": problem.grid.map(|(h, w)| vec![h, w]),
        "kernel_support": problem.kernel_true.len(),
        "sigma_y": config.problem.sigma_y,
        "data_range": config.problem.data_range,
        "x_true": "x_true.csv",
        "kernel": "kernel.csv",
        "y": "y.csv",
    });
    schema::validate_manifest(&manifest)
        .map_err(|e| anyhow::anyhow!("emitted manifest invalid: {e:?}"))?;
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;

    // Re-verify the noiseless identity on load, as documented.
    if config.problem.sigma_y == 0.0 {
        let x = formats::read_csv_real(&dir.join("x_true.csv"))?;
        let k = formats::read_csv_real(&dir.join("kernel.csv"))?;
        let y = formats::read_csv_real(&dir.join("y.csv"))?;
        let op = problem::operator_for(&x, problem.grid, &k)?;
        let direct = op.apply(&x)?;
        anyhow::ensure!(direct == y, "noiseless measurement failed re-verification on load");
    }
    println!("problem written to {}", dir.display());
    Ok(())
}

fn restore_cmd(config: &ExperimentConfig) -> anyhow::Result<()> {
    std::fs::create_dir_all(&config.out_dir)?;
    let denoiser = problem::build_prior(&config.prior)?;
    for &seed in &config.seeds {
        let mut gen_rng = stream(seed, STREAM_PROBLEM);
        let problem = problem::generate(
            &config.problem.signal,
            &config.prior,
            config.problem.dim,
            &config.problem.kernel,
            config.problem.sigma_y,
            &mut gen_rng,
        )?;
        let record = harness::run_seed(config, &problem, denoiser.as_ref(), seed)?;

        let dir = &config.out_dir;
        let tag = format!("seed{seed}");
        let doc = serde_json::to_value(&record)?;
        schema::validate_run_record(&doc)
            .map_err(|e| anyhow::anyhow!("emitted result invalid: {e:?}"))?;
        std::fs::write(
            dir.join(format!("result_{tag}.json")),
            serde_json::to_string_pretty(&record)?,
        )?;
        if record.aborted.is_none() {
            formats::write_csv_real(&dir.join(format!("x0_{tag}.csv")), &record.result.x0)?;
            formats::write_csv_real(&dir.join(format!("phi_{tag}.csv")), &record.result.phi)?;
            let kernel_errors: Vec<f64> = record
                .result
                .trace
                .iter()
                .map(|rec| {
                    padded_kernel_error(
                        &rec.phi,
                        &problem.kernel_true,
                        problem.x_true.len(),
                        problem.grid,
                    )
                })
                .collect();
            std::fs::write(
                dir.join(format!("trace_{tag}.csv")),
                plot::trace_csv(&record.result.trace, Some(&kernel_errors)),
            )?;
            std::fs::write(
                dir.join(format!("trace_{tag}.svg")),
                plot::trace_svg(&record.result.trace, Some(&kernel_errors)),
            )?;
            if let Some(m) = &record.metrics {
                println!(
                    "seed {seed}: psnr {:?} dB, kernel error {:.4} ({} denoiser evals, {:.2}s)",
                    m.psnr_db, m.kernel_error_l2_normalized, record.result.denoiser_evals,
                    record.timing_secs
                );
            }
        } else {
            println!("seed {seed}: aborted: {}", record.aborted.as_deref().unwrap_or("?"));
        }
    }
    Ok(())
}

fn reference_samplers_cmd(sweeps: usize, seed: u64) -> anyhow::Result<()> {
    let toy = ToyModel::new(
        ToyPrior::Gaussian(GaussianPrior::new(vec![0.4], 1.0)?),
        ToyOperator::ScalarFamily { phi_mean: 1.0, phi_var: 0.25 },
        0.5,
        NoiseSchedule::linear(2, 1.0)?,
        vec![0.9],
    )?;

    let mut baseline_rng = stream(seed, 10);
    let baseline = run_reference_sampler(&toy, SamplerVariant::Sampler1, sweeps, 1, &mut baseline_rng)?;
    let burn = sweeps / 10;
    let bx: Vec<f64> = baseline[burn..].iter().map(|s| s.x[0]).collect();
    let bp: Vec<f64> = baseline[burn..].iter().map(|s| s.phi).collect();

    println!("toy posterior stationarity vs Sampler 1 ({sweeps} sweeps, burn {burn}):");
    for (variant, label) in [
        (SamplerVariant::Sampler2, "Sampler 2"),
        (SamplerVariant::Sampler3, "Sampler 3"),
        (SamplerVariant::Pcgs, "PCGS"),
    ] {
        let mut rng = stream(seed, 11);
        let chain = run_reference_sampler(&toy, variant, sweeps, 1, &mut rng)?;
        let cx: Vec<f64> = chain[burn..].iter().map(|s| s.x[0]).collect();
        let cp: Vec<f64> = chain[burn..].iter().map(|s| s.phi).collect();
        let tv_x = tv_distance_1d(&bx, &cx, Binning::new(40, -4.0, 4.0))?;
        let tv_p = tv_distance_1d(&bp, &cp, Binning::new(40, -2.0, 3.0))?;
        println!("  {label:<10} TV(x0) = {tv_x:.4}  TV(phi) = {tv_p:.4}");
    }

    println!("trimming validator on the four-variable example:");
    let schedule = four_variable_example();
    println!("  original order: {:?}", schedule.validate(3).map(|_| "valid"));
    let mut swapped = schedule;
    swapped.steps.swap(2, 3);
    match swapped.validate(3) {
        Ok(_) => println!("  swapped order: unexpectedly valid"),
        Err(e) => println!("  swapped order rejected: {e}"),
    }
    Ok(())
}
