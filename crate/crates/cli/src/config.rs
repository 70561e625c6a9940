//! Run configuration: a JSON document whose fields can be overridden by flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use ocolt_core::experiment::{Algorithm, ExperimentConfig, ScenarioKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: ScenarioKind,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub alpha: f64,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub checkpoint_every: usize,
    /// Not echoed into summaries, so artifacts do not depend on where they were written.
    #[serde(skip_serializing)]
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = ExperimentConfig::default();
        RunConfig {
            scenario: ScenarioConfig { name: base.scenario, n: base.n, seed: base.seed },
            algorithm: base.algorithm,
            epsilon: base.epsilon,
            alpha: base.alpha,
            horizon: base.horizon,
            checkpoint_every: base.checkpoint_every,
            output_dir: PathBuf::from("ocolt-out"),
        }
    }
}

/// Flags shared by `run` and `sweep`; each one overrides the JSON field of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// datacenter, static_lp or all_feasible.
    #[arg(long)]
    pub scenario: Option<ScenarioKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// adaptive, ogd, fixed_rate or static_averaged.
    #[arg(long = "algo")]
    pub algorithm: Option<Algorithm>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Horizon.
    #[arg(long = "T")]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub checkpoint_every: Option<usize>,
    /// Output directory.
    #[arg(long = "out")]
    pub output_dir: Option<PathBuf>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.scenario {
            cfg.scenario.name = v;
        }
        if let Some(v) = self.n {
            cfg.scenario.n = v;
        }
        if let Some(v) = self.seed {
            cfg.scenario.seed = v;
        }
        if let Some(v) = self.algorithm {
            cfg.algorithm = v;
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = self.checkpoint_every {
            cfg.checkpoint_every = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.experiment().validate()?;
        Ok(cfg)
    }
}

fn load(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

impl RunConfig {
    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            scenario: self.scenario.name,
            n: self.scenario.n,
            seed: self.scenario.seed,
            algorithm: self.algorithm,
            epsilon: self.epsilon,
            alpha: self.alpha,
            horizon: self.horizon,
            checkpoint_every: self.checkpoint_every,
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> RunConfig {
        RunConfig { epsilon, ..self.clone() }
    }
}

/// Parses `0,0.25,0.5` into a nonempty list of rates in `[0, 1)`.
pub fn parse_epsilons(list: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let eps: f64 = part.parse().with_context(|| format!("invalid epsilon '{part}'"))?;
        if !(0.0..1.0).contains(&eps) {
            bail!("epsilon {eps} outside [0, 1)");
        }
        out.push(eps);
    }
    if out.is_empty() {
        bail!("--epsilons needs at least one value");
    }
    Ok(out)
}
