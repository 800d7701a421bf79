//! Experiment configuration. One JSON file drives one command; fields a
//! command does not use are ignored by it.

use serde::{Deserialize, Serialize};
use treepress::config::{MapSpec, PotentialSpec};
use treepress::exceptional::{MAX_SEED_PERIOD, MAX_SET_SIZE};
use treepress::pressure::{PressureOracle, HYPERBOLICITY_SLACK};
use treepress::FoldMode;

use crate::error::CliError;

pub const DEFAULT_ULAM_ITERS: usize = 100_000;
pub const DEFAULT_GRID_SIZE: usize = 401;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_NORMALITY_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorSpec {
    Tree { n: usize },
    Ulam { bins: usize, iters: Option<usize> },
    Periodic { n: usize },
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub map: MapSpec,
    pub potential: PotentialSpec,
    /// Base point of preimage trees.
    pub x: Option<f64>,
    /// Largest depth for `tree-pressure`.
    pub n_max: Option<usize>,
    /// Depth / horizon for single-depth commands.
    pub n: Option<usize>,
    /// Averaging length `N`.
    pub n_avg: Option<usize>,
    #[serde(default)]
    pub estimators: Vec<EstimatorSpec>,
    /// Singular set for `normality`; defaults to the poles of the potential.
    pub lambda: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub p_max: Option<usize>,
    pub size_max: Option<usize>,
    /// `Σ̃` for `sigma-prime`.
    pub sigma_tilde: Option<Vec<f64>>,
    pub oracle: Option<PressureOracle>,
    pub grid_size: Option<usize>,
    pub slack: Option<f64>,
    pub samples: Option<usize>,
    pub mode: Option<FoldMode>,
    pub out: Option<String>,
}

pub fn require<T: Copy>(value: Option<T>, field: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Config(format!("missing field `{field}`")))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn p_max(&self) -> usize {
        self.p_max.unwrap_or(MAX_SEED_PERIOD)
    }

    pub fn size_max(&self) -> usize {
        self.size_max.unwrap_or(MAX_SET_SIZE)
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size.unwrap_or(DEFAULT_GRID_SIZE)
    }

    pub fn slack(&self) -> f64 {
        self.slack.unwrap_or(HYPERBOLICITY_SLACK)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn oracle(&self) -> Result<PressureOracle, CliError> {
        require(self.oracle, "oracle")
    }
}
