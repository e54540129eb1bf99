//! Experiment configuration: the TOML file shape, flag overrides, and the
//! resolved form consumed by the runner.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::centroid::{CentroidConfig, InjectionSlot};
use crate::data::{DatasetEntry, Manifest};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::mlp::OutputHead;
use crate::operators::MutationStrategy;
use crate::opposition::{OppositionConfig, OppositionMode};
use crate::optimizer::OptimizerConfig;
use crate::population::RepairPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    CendeDobl,
    De,
}

/// Optional optimizer settings, applied over the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerOverrides {
    pub population_size: Option<usize>,
    pub max_evaluations: Option<usize>,
    pub f: Option<f64>,
    pub cr: Option<f64>,
    pub jumping_rate: Option<f64>,
    pub opposition_mode: Option<OppositionMode>,
    /// 0 disables centroid injection.
    pub centroid_count: Option<usize>,
    pub injection_slot: Option<InjectionSlot>,
    pub mutation: Option<MutationStrategy>,
    pub initial_opposition: Option<bool>,
    pub repair: Option<RepairPolicy>,
}

impl OptimizerOverrides {
    pub fn apply(&self, cfg: &mut OptimizerConfig) -> Result<()> {
        if let Some(v) = self.population_size {
            cfg.population_size = v;
        }
        if let Some(v) = self.max_evaluations {
            cfg.max_evaluations = v;
        }
        if let Some(v) = self.f {
            cfg.de.f = v;
        }
        if let Some(v) = self.cr {
            cfg.de.cr = v;
        }
        if self.jumping_rate.is_some() || self.opposition_mode.is_some() {
            cfg.opposition = OppositionConfig::new(
                self.jumping_rate.unwrap_or(cfg.opposition.jumping_rate()),
                self.opposition_mode.unwrap_or(cfg.opposition.mode()),
            )?;
        }
        match self.centroid_count {
            Some(0) => cfg.centroid = None,
            Some(n) => cfg.centroid = Some(CentroidConfig { count: n, ..cfg.centroid.unwrap_or_default() }),
            None => {}
        }
        if let (Some(slot), Some(c)) = (self.injection_slot, cfg.centroid.as_mut()) {
            c.slot = slot;
        }
        if let Some(v) = self.mutation {
            cfg.mutation = v;
        }
        if let Some(v) = self.initial_opposition {
            cfg.initial_opposition = v;
        }
        if let Some(v) = self.repair {
            cfg.repair = v;
        }
        Ok(())
    }

    /// Fields set in `other` win.
    pub fn merged(&self, other: &OptimizerOverrides) -> OptimizerOverrides {
        OptimizerOverrides {
            population_size: other.population_size.or(self.population_size),
            max_evaluations: other.max_evaluations.or(self.max_evaluations),
            f: other.f.or(self.f),
            cr: other.cr.or(self.cr),
            jumping_rate: other.jumping_rate.or(self.jumping_rate),
            opposition_mode: other.opposition_mode.or(self.opposition_mode),
            centroid_count: other.centroid_count.or(self.centroid_count),
            injection_slot: other.injection_slot.or(self.injection_slot),
            mutation: other.mutation.or(self.mutation),
            initial_opposition: other.initial_opposition.or(self.initial_opposition),
            repair: other.repair.or(self.repair),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub name: String,
    pub kind: AlgorithmKind,
    #[serde(default)]
    pub overrides: OptimizerOverrides,
}

impl AlgorithmSpec {
    pub fn cende_dobl() -> Self {
        Self {
            name: "CenDE-DOBL".into(),
            kind: AlgorithmKind::CendeDobl,
            overrides: OptimizerOverrides::default(),
        }
    }

    pub fn de() -> Self {
        Self {
            name: "DE".into(),
            kind: AlgorithmKind::De,
            overrides: OptimizerOverrides::default(),
        }
    }
}

/// Replaces the root seed for a single (algorithm, dataset) cell's optimizer
/// runs. Fold assignment is unaffected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedOverride {
    pub algorithm: String,
    pub dataset: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Min-max statistics from the whole dataset.
    #[default]
    Global,
    /// Min-max statistics from each training partition.
    PerFold,
}

/// On-disk shape of an experiment file. Every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    /// Relative to the config file's directory.
    pub manifest: PathBuf,
    /// Manifest names; empty means every dataset whose file exists.
    pub datasets: Vec<String>,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmSpec>,
    pub k: usize,
    pub repetitions: usize,
    pub root_seed: u64,
    pub output_dir: PathBuf,
    /// Weights and biases are searched in `[-weight_bound, weight_bound]`.
    pub weight_bound: f64,
    pub normalization: Normalization,
    pub head: OutputHead,
    pub execution: Execution,
    pub optimizer: OptimizerOverrides,
    #[serde(rename = "seed_override")]
    pub seed_overrides: Vec<SeedOverride>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            manifest: PathBuf::from("data/manifest.toml"),
            datasets: Vec::new(),
            algorithms: vec![AlgorithmSpec::cende_dobl(), AlgorithmSpec::de()],
            k: 10,
            repetitions: 1,
            root_seed: 0,
            output_dir: PathBuf::from("results"),
            weight_bound: 10.0,
            normalization: Normalization::Global,
            head: OutputHead::Rounded,
            execution: Execution::default(),
            optimizer: OptimizerOverrides::default(),
            seed_overrides: Vec::new(),
        }
    }
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Parses `path` and anchors its relative manifest path to the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if cfg.manifest.is_relative() {
            cfg.manifest = path.parent().unwrap_or(Path::new(".")).join(&cfg.manifest);
        }
        Ok(cfg)
    }

    /// Keeps only the named algorithms, in the given order.
    pub fn select_algorithms(&mut self, names: &[String]) -> Result<()> {
        let mut picked = Vec::with_capacity(names.len());
        for n in names {
            let spec = self
                .algorithms
                .iter()
                .find(|a| a.name.eq_ignore_ascii_case(n))
                .cloned()
                .or_else(|| match n.to_ascii_lowercase().as_str() {
                    "cende-dobl" | "cende" => Some(AlgorithmSpec::cende_dobl()),
                    "de" => Some(AlgorithmSpec::de()),
                    _ => None,
                })
                .ok_or_else(|| Error::config(format!("unknown algorithm {n}")))?;
            picked.push(spec);
        }
        self.algorithms = picked;
        Ok(())
    }

    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let manifest = Manifest::load(&self.manifest)?;
        self.resolve_with(&manifest)
    }

    pub fn resolve_with(&self, manifest: &Manifest) -> Result<ExperimentConfig> {
        let datasets = if self.datasets.is_empty() {
            manifest.datasets.iter().filter(|d| d.path.exists()).cloned().collect()
        } else {
            self.datasets
                .iter()
                .map(|n| {
                    manifest
                        .get(n)
                        .cloned()
                        .ok_or_else(|| Error::config(format!("dataset {n} is not in the manifest")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let cfg = ExperimentConfig {
            datasets,
            algorithms: self.algorithms.clone(),
            k: self.k,
            repetitions: self.repetitions,
            root_seed: self.root_seed,
            output_dir: self.output_dir.clone(),
            weight_bound: self.weight_bound,
            normalization: self.normalization,
            head: self.head,
            execution: self.execution,
            optimizer: self.optimizer.clone(),
            seed_overrides: self.seed_overrides.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetEntry>,
    pub algorithms: Vec<AlgorithmSpec>,
    pub k: usize,
    pub repetitions: usize,
    pub root_seed: u64,
    pub output_dir: PathBuf,
    pub weight_bound: f64,
    pub normalization: Normalization,
    pub head: OutputHead,
    pub execution: Execution,
    /// Shared by all algorithms; per-algorithm overrides win.
    pub optimizer: OptimizerOverrides,
    pub seed_overrides: Vec<SeedOverride>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::config("no datasets selected"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("no algorithms selected"));
        }
        if self.k < 2 {
            return Err(Error::config(format!("k = {} but at least 2 folds are needed", self.k)));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be positive"));
        }
        if !(self.weight_bound.is_finite() && self.weight_bound > 0.0) {
            return Err(Error::config(format!("weight bound {} must be positive", self.weight_bound)));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::config(format!("duplicate algorithm name {}", a.name)));
            }
        }
        // catch bad optimizer settings before any data is touched
        for a in &self.algorithms {
            let mut probe = OptimizerConfig::new(crate::population::Bounds::uniform(1, -1.0, 1.0)?, 0);
            self.optimizer.merged(&a.overrides).apply(&mut probe)?;
            probe.validate()?;
        }
        Ok(())
    }

    pub fn seed_for(&self, algorithm: &str, dataset: &str) -> u64 {
        self.seed_overrides
            .iter()
            .find(|s| s.algorithm == algorithm && s.dataset == dataset)
            .map_or(self.root_seed, |s| s.seed)
    }
}
