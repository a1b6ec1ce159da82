use std::path::{Path, PathBuf};

use ddfrac::harness::{LoadProgram, SolverSpec, DEFAULT_STEPS};
use ddfrac::{
    nondimensionalize, DimensionlessParams, Geometry, NoiseDistribution, PhysicalParams, ResistanceModel, Sampling,
    SpecimenModel,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

/// One experiment: specimen, material, data, solver and load history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub specimen: SpecimenBlock,
    pub resistance: ResistanceModel,
    #[serde(default)]
    pub dataset: DatasetBlock,
    #[serde(default)]
    pub solver: SolverSpec,
    /// Defaults to a monotone ramp at the specimen's load increment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub program: Option<LoadProgram>,
    #[serde(default)]
    pub convergence: ConvergenceBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

/// Exactly one of `physical` and `dimensionless` must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecimenBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensionless: Option<DimensionlessParams>,
    #[serde(default = "standard_dcb")]
    pub geometry: Geometry,
}

fn standard_dcb() -> Geometry {
    Geometry::StandardDcb
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetBlock {
    pub n: usize,
    pub interval: [f64; 2],
    /// Relative half-range of the noise.
    pub amplitude: f64,
    pub noise: NoiseDistribution,
    pub sampling: Sampling,
    pub seed: u64,
    /// Existing `a,F_R,G_R` file used by `solve` instead of sampling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl Default for DatasetBlock {
    fn default() -> Self {
        Self {
            n: 50,
            interval: [0.0, 1.1],
            amplitude: 0.0,
            noise: NoiseDistribution::Uniform,
            sampling: Sampling::Uniform,
            seed: 0,
            path: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    #[default]
    Points,
    Noise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceBlock {
    pub study: StudyKind,
    pub replications: usize,
    /// Data-set sizes of a point study.
    pub points: Vec<usize>,
    /// Noise half-ranges of a noise study, run at `dataset.n` points.
    pub amplitudes: Vec<f64>,
}

impl Default for ConvergenceBlock {
    fn default() -> Self {
        Self {
            study: StudyKind::Points,
            replications: 100,
            points: vec![10, 20, 50, 100, 250, 500, 1000, 5000, 10000],
            amplitudes: vec![0.1, 0.05, 0.025, 0.005, 5e-4, 5e-5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: PathBuf,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

/// Everything derived from a validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub specimen: SpecimenModel,
    pub schedule: Vec<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.resolve()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Checks the blocks for consistency and builds the specimen and schedule.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        if self.schema != SCHEMA {
            return Err(CliError::Config(format!(
                "unsupported schema {} (expected {SCHEMA})",
                self.schema
            )));
        }
        let (params, increment) = match (&self.specimen.physical, &self.specimen.dimensionless) {
            (Some(p), None) => {
                let scaled = nondimensionalize(p)?;
                (scaled.params, scaled.delta_t)
            }
            (None, Some(d)) => (*d, ddfrac::harness::DEFAULT_INCREMENT),
            _ => {
                return Err(CliError::Config(
                    "specimen needs exactly one of `physical` and `dimensionless`".into(),
                ))
            }
        };
        let specimen = match self.specimen.geometry {
            Geometry::StandardDcb => SpecimenModel::standard(params)?,
            Geometry::TaperedDcb(t) => SpecimenModel::tapered(params, t)?,
        };
        self.resistance.validate()?;
        let program = self
            .program
            .clone()
            .unwrap_or_else(|| LoadProgram::monotone(increment, DEFAULT_STEPS));
        let schedule = program.schedule()?;
        let [lo, hi] = self.dataset.interval;
        if !(0.0 <= lo && lo <= hi && hi <= ddfrac::params::DEFAULT_A_MAX) {
            return Err(CliError::Config(format!("dataset interval [{lo}, {hi}] is invalid")));
        }
        if self.convergence.replications == 0 {
            return Err(CliError::Config("convergence.replications must be positive".into()));
        }
        Ok(Resolved { specimen, schedule })
    }
}
