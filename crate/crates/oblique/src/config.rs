//! Configuration files and their merge with command-line flags.
//!
//! Precedence is flags, then the config file, then built-in defaults. The
//! resolved values are echoed in every command's output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use oblique_core::conjecture::{RankSchedule, SearchConfig};
use oblique_core::measures::OptimizerConfig;
use oblique_core::states::RngSeed;

use crate::error::CliError;
use crate::formats::{parse, read_file};

/// Optimizer settings; absent fields fall through to the next source.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSettings {
    pub restarts: Option<usize>,
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub initial_scale: Option<f64>,
    pub seed: Option<u64>,
    pub condition_cap: Option<f64>,
    pub orthonormal_only: Option<bool>,
}

impl OptimizerSettings {
    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: OptimizerSettings) -> OptimizerSettings {
        OptimizerSettings {
            restarts: self.restarts.or(lower.restarts),
            max_iterations: self.max_iterations.or(lower.max_iterations),
            tolerance: self.tolerance.or(lower.tolerance),
            initial_scale: self.initial_scale.or(lower.initial_scale),
            seed: self.seed.or(lower.seed),
            condition_cap: self.condition_cap.or(lower.condition_cap),
            orthonormal_only: self.orthonormal_only.or(lower.orthonormal_only),
        }
    }

    pub fn resolve(&self, defaults: &OptimizerConfig) -> Result<OptimizerConfig, CliError> {
        let c = OptimizerConfig {
            restarts: self.restarts.unwrap_or(defaults.restarts),
            max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
            tolerance: self.tolerance.unwrap_or(defaults.tolerance),
            initial_scale: self.initial_scale.unwrap_or(defaults.initial_scale),
            seed: self.seed.map(RngSeed).unwrap_or(defaults.seed),
            condition_cap: self.condition_cap.unwrap_or(defaults.condition_cap),
            orthonormal_only: self.orthonormal_only.unwrap_or(defaults.orthonormal_only),
        };
        c.validate()?;
        Ok(c)
    }
}

/// Resolved optimizer configuration as echoed in outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerEcho {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_scale: f64,
    pub seed: u64,
    pub condition_cap: f64,
    pub orthonormal_only: bool,
}

impl From<&OptimizerConfig> for OptimizerEcho {
    fn from(c: &OptimizerConfig) -> Self {
        Self {
            restarts: c.restarts,
            max_iterations: c.max_iterations,
            tolerance: c.tolerance,
            initial_scale: c.initial_scale,
            seed: c.seed.0,
            condition_cap: c.condition_cap,
            orthonormal_only: c.orthonormal_only,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RanksJson {
    Cycle,
    Full,
    Fixed(usize),
}

impl From<RanksJson> for RankSchedule {
    fn from(r: RanksJson) -> Self {
        match r {
            RanksJson::Cycle => RankSchedule::Cycle,
            RanksJson::Full => RankSchedule::Full,
            RanksJson::Fixed(n) => RankSchedule::Fixed(n),
        }
    }
}

impl From<RankSchedule> for RanksJson {
    fn from(r: RankSchedule) -> Self {
        match r {
            RankSchedule::Cycle => RanksJson::Cycle,
            RankSchedule::Full => RanksJson::Full,
            RankSchedule::Fixed(n) => RanksJson::Fixed(n),
        }
    }
}

/// Conjecture search settings; absent fields fall through.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSettings {
    pub dims: Option<Vec<Vec<usize>>>,
    pub samples_per_dims: Option<usize>,
    pub ranks: Option<RanksJson>,
    pub condition_cap: Option<f64>,
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub initial_scale: Option<f64>,
    pub seed: Option<u64>,
    pub threshold: Option<f64>,
    pub certification_tolerance: Option<f64>,
    pub orthonormal_only: Option<bool>,
    /// JSONL log path.
    pub output: Option<PathBuf>,
}

/// Default log path of the conjecture search.
pub const DEFAULT_LOG: &str = "conjecture.jsonl";

impl SearchSettings {
    pub fn over(self, lower: SearchSettings) -> SearchSettings {
        SearchSettings {
            dims: self.dims.or(lower.dims),
            samples_per_dims: self.samples_per_dims.or(lower.samples_per_dims),
            ranks: self.ranks.or(lower.ranks),
            condition_cap: self.condition_cap.or(lower.condition_cap),
            max_iterations: self.max_iterations.or(lower.max_iterations),
            tolerance: self.tolerance.or(lower.tolerance),
            initial_scale: self.initial_scale.or(lower.initial_scale),
            seed: self.seed.or(lower.seed),
            threshold: self.threshold.or(lower.threshold),
            certification_tolerance: self
                .certification_tolerance
                .or(lower.certification_tolerance),
            orthonormal_only: self.orthonormal_only.or(lower.orthonormal_only),
            output: self.output.or(lower.output),
        }
    }

    pub fn resolve(&self) -> Result<(SearchConfig, PathBuf), CliError> {
        let d = SearchConfig::default();
        let c = SearchConfig {
            dims: self.dims.clone().unwrap_or(d.dims),
            samples_per_dims: self.samples_per_dims.unwrap_or(d.samples_per_dims),
            ranks: self.ranks.map(Into::into).unwrap_or(d.ranks),
            condition_cap: self.condition_cap.unwrap_or(d.condition_cap),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            initial_scale: self.initial_scale.unwrap_or(d.initial_scale),
            seed: self.seed.map(RngSeed).unwrap_or(d.seed),
            threshold: self.threshold.unwrap_or(d.threshold),
            certification_tolerance: self
                .certification_tolerance
                .unwrap_or(d.certification_tolerance),
            orthonormal_only: self.orthonormal_only.unwrap_or(d.orthonormal_only),
        };
        c.validate()?;
        let output = self
            .output
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_LOG));
        Ok((c, output))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchEcho {
    pub dims: Vec<Vec<usize>>,
    pub samples_per_dims: usize,
    pub ranks: RanksJson,
    pub condition_cap: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_scale: f64,
    pub seed: u64,
    pub threshold: f64,
    pub certification_tolerance: f64,
    pub orthonormal_only: bool,
    pub output: PathBuf,
}

impl SearchEcho {
    pub fn new(c: &SearchConfig, output: &Path) -> Self {
        Self {
            dims: c.dims.clone(),
            samples_per_dims: c.samples_per_dims,
            ranks: c.ranks.into(),
            condition_cap: c.condition_cap,
            max_iterations: c.max_iterations,
            tolerance: c.tolerance,
            initial_scale: c.initial_scale,
            seed: c.seed.0,
            threshold: c.threshold,
            certification_tolerance: c.certification_tolerance,
            orthonormal_only: c.orthonormal_only,
            output: output.to_path_buf(),
        }
    }
}

pub fn read_settings<T: for<'de> Deserialize<'de> + Default>(
    path: Option<&Path>,
) -> Result<T, CliError> {
    match path {
        Some(p) => parse("config", &read_file(p)?),
        None => Ok(T::default()),
    }
}
