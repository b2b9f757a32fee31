//! Experiment configuration: one JSON document drives generation and
//! restoration. Validation runs before any sampling and reports the failing
//! field by name.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use gibbsddrm::ddrm::{DdrmParams, TraceGranularity};
use gibbsddrm::pcgs::{MtSchedule, PcgsConfig, PhiInit};
use gibbsddrm::phi_sampler::{LangevinConfig, PhiPrior};
use gibbsddrm::priors::{GaussianPrior, GmmPrior, NoiseSchedule};

/// Validation failure naming the offending config field.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field '{}': {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum KernelSpec {
    /// Simplex-projected uniform taps in `[lo, hi]`, seeded.
    SimplexRandom { support: usize, lo: f64, hi: f64 },
    /// Discrete Gaussian bump over the support, normalized.
    Bump { support: usize, width: f64 },
    Uniform { support: usize },
    /// Taps from a CSV file.
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum SignalSpec {
    /// Draw the ground truth from the prior.
    FromPrior,
    /// Load a 1-D signal from CSV.
    Csv { path: PathBuf },
    /// Load a 2-D image from binary PGM (values in [0,1]).
    Pgm { path: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemSpec {
    pub signal: SignalSpec,
    /// Signal length for synthetic 1-D problems.
    #[serde(default)]
    pub dim: Option<usize>,
    pub kernel: KernelSpec,
    pub sigma_y: f64,
    pub data_range: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum PriorSpec {
    /// The benchmark's four-component textured mixture.
    BenchGmm { dim: usize, variance: f64 },
    Gmm { weights: Vec<f64>, means: Vec<Vec<f64>>, variance: f64 },
    Gaussian { mean: Vec<f64>, variance: f64 },
    /// Mixture parameters from a JSON document
    /// `{"weights": [...], "means": [[...], ...], "variance": v}`.
    GmmJson { path: PathBuf },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ScheduleSpec {
    pub t_steps: usize,
    pub sigma_max: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct DdrmSpec {
    pub eta: f64,
    pub eta_b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SamplerSpec {
    pub n_cycles: usize,
    pub m_schedule: MtSchedule,
    pub ddrm: DdrmSpec,
    pub langevin: LangevinConfig,
    pub phi_init: PhiInit,
    #[serde(default)]
    pub granularity: TraceGranularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    #[default]
    Gibbsddrm,
    Ddrm,
    Blocked,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub prior: PriorSpec,
    pub schedule: ScheduleSpec,
    pub pcgs: SamplerSpec,
    #[serde(default)]
    pub mode: RunMode,
    pub out_dir: PathBuf,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))?;
        Ok(config)
    }

    /// Full validation; every downstream module invariant is checked here
    /// before any sampling starts.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.problem;
        if !(p.sigma_y >= 0.0) || !p.sigma_y.is_finite() {
            return Err(err("problem.sigma_y", "must be nonnegative and finite"));
        }
        if !(p.data_range > 0.0) {
            return Err(err("problem.data_range", "must be positive"));
        }
        match &p.signal {
            SignalSpec::FromPrior => {
                if p.dim.is_none() {
                    return Err(err("problem.dim", "required for synthetic signals"));
                }
            }
            SignalSpec::Csv { path } | SignalSpec::Pgm { path } => {
                if !path.exists() {
                    return Err(err("problem.signal.path", format!("{} does not exist", path.display())));
                }
            }
        }
        match &p.kernel {
            KernelSpec::SimplexRandom { support, lo, hi } => {
                if *support == 0 {
                    return Err(err("problem.kernel.support", "must be positive"));
                }
                if !(hi > lo) || *lo < 0.0 {
                    return Err(err("problem.kernel", "needs 0 <= lo < hi"));
                }
            }
            KernelSpec::Bump { support, width } => {
                if *support == 0 {
                    return Err(err("problem.kernel.support", "must be positive"));
                }
                if !(*width > 0.0) {
                    return Err(err("problem.kernel.width", "must be positive"));
                }
            }
            KernelSpec::Uniform { support } => {
                if *support == 0 {
                    return Err(err("problem.kernel.support", "must be positive"));
                }
            }
            KernelSpec::Csv { path } => {
                if !path.exists() {
                    return Err(err("problem.kernel.path", format!("{} does not exist", path.display())));
                }
            }
        }

        match &self.prior {
            PriorSpec::BenchGmm { dim, variance } => {
                if *dim == 0 {
                    return Err(err("prior.dim", "must be positive"));
                }
                if !(*variance > 0.0) {
                    return Err(err("prior.variance", "must be positive"));
                }
            }
            PriorSpec::Gmm { weights, means, variance } => {
                GmmPrior::new(weights.clone(), means.clone(), *variance)
                    .map_err(|e| err("prior", e.to_string()))?;
            }
            PriorSpec::Gaussian { mean, variance } => {
                GaussianPrior::new(mean.clone(), *variance)
                    .map_err(|e| err("prior", e.to_string()))?;
            }
            PriorSpec::GmmJson { path } => {
                if !path.exists() {
                    return Err(err("prior.path", format!("{} does not exist", path.display())));
                }
            }
        }

        NoiseSchedule::linear(self.schedule.t_steps, self.schedule.sigma_max)
            .map_err(|e| err("schedule", e.to_string()))?;

        DdrmParams::new(self.pcgs.ddrm.eta, self.pcgs.ddrm.eta_b, p.sigma_y)
            .map_err(|e| err("pcgs.ddrm", e.to_string()))?;
        self.pcgs
            .langevin
            .validate()
            .map_err(|e| err("pcgs.langevin", e.to_string()))?;
        if self.pcgs.n_cycles == 0 {
            return Err(err("pcgs.n_cycles", "must be >= 1"));
        }
        self.pcgs
            .m_schedule
            .validate(self.schedule.t_steps)
            .map_err(|e| err("pcgs.m_schedule", e.to_string()))?;
        if self.mode != RunMode::Ddrm
            && self.pcgs.m_schedule.total(self.schedule.t_steps) > 0
            && p.sigma_y == 0.0
        {
            return Err(err("problem.sigma_y", "phi updates require sigma_y > 0"));
        }
        if self.seeds.is_empty() {
            return Err(err("seeds", "at least one seed required"));
        }
        Ok(())
    }

    /// Assembles the core sampler configuration (σ_y comes from the problem).
    pub fn pcgs_config(&self) -> PcgsConfig {
        PcgsConfig {
            n_cycles: self.pcgs.n_cycles,
            m_schedule: self.pcgs.m_schedule.clone(),
            ddrm: DdrmParams {
                eta: self.pcgs.ddrm.eta,
                eta_b: self.pcgs.ddrm.eta_b,
                sigma_y: self.problem.sigma_y,
            },
            langevin: self.pcgs.langevin,
            phi_init: self.pcgs.phi_init.clone(),
            granularity: self.pcgs.granularity,
        }
    }
}

/// A reasonable default experiment: the calibrated 1-D benchmark settings.
pub fn default_config() -> ExperimentConfig {
    ExperimentConfig {
        problem: ProblemSpec {
            signal: SignalSpec::FromPrior,
            dim: Some(64),
            kernel: KernelSpec::SimplexRandom { support: 5, lo: 0.02, hi: 1.0 },
            sigma_y: 0.02,
            data_range: 2.0,
        },
        prior: PriorSpec::BenchGmm { dim: 64, variance: 0.01 },
        schedule: ScheduleSpec { t_steps: 100, sigma_max: 1.0 },
        pcgs: SamplerSpec {
            n_cycles: 1,
            m_schedule: MtSchedule::TwoRegime { active_below: 70, count: 3 },
            ddrm: DdrmSpec { eta: 0.8, eta_b: 0.9 },
            langevin: LangevinConfig {
                step_size: 5e-6,
                n_steps: 100,
                noise_scale: 1.0,
                prior: PhiPrior::Laplace { lambda: 10.0 },
                project: true,
                refresh_xhat: false,
            },
            phi_init: PhiInit::Named("uniform".into()),
            granularity: TraceGranularity::PerStep,
        },
        mode: RunMode::Gibbsddrm,
        out_dir: PathBuf::from("out"),
        seeds: vec![0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_validates() {
        default_config().validate().unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let mut config = default_config();
        config.problem.sigma_y = -1.0;
        let e = config.validate().unwrap_err();
        assert_eq!(e.field, "problem.sigma_y");

        let mut config = default_config();
        config.schedule.t_steps = 0;
        assert_eq!(config.validate().unwrap_err().field, "schedule");

        let mut config = default_config();
        config.pcgs.langevin.step_size = 0.0;
        assert_eq!(config.validate().unwrap_err().field, "pcgs.langevin");

        let mut config = default_config();
        config.seeds.clear();
        assert_eq!(config.validate().unwrap_err().field, "seeds");
    }

    #[test]
    fn config_json_round_trip() {
        let config = default_config();
        let text = serde_json::to_string_pretty(&config).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);
    }
}
