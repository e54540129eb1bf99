//! Cross-validated training experiments over algorithms × datasets × folds.
//!
//! Every cell derives its optimizer seed from `(seed, dataset, repetition,
//! fold)`, where `seed` is the root seed unless the (algorithm, dataset) pair
//! has an override. Algorithms sharing a seed therefore start from the same
//! initial population on the same fold. Fold plans depend on the root seed
//! only.

pub mod config;
pub mod published;
pub mod report;

use crate::data::{fold_split, normalize_minmax, stratified_kfold, Dataset, FoldPlan, MinMaxScaler};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::mlp::{ClassificationObjective, NetworkTopology, OutputHead, WeightDecoding};
use crate::optimizer::{run_cende_dobl, run_de_baseline, OptimizerConfig};
use crate::population::Bounds;
use crate::seed::{derive_seed, label_hash};

pub use config::{AlgorithmKind, AlgorithmSpec, ConfigFile, ExperimentConfig, Normalization, OptimizerOverrides};
pub use report::{compute_ranks, emit_report, DatasetInfo, FoldResult, ReportFormat, RunReport, Summary};

/// Network shape used for a dataset under the given head.
pub fn topology_for(ds: &Dataset, head: OutputHead) -> Result<NetworkTopology> {
    let mut t = NetworkTopology::benchmark(ds.dim())?;
    if head == OutputHead::Argmax {
        t.outputs = ds.class_count();
    }
    Ok(t)
}

fn objective(ds: &Dataset, decoding: &WeightDecoding, head: OutputHead) -> Result<ClassificationObjective> {
    ClassificationObjective::new(
        decoding.clone(),
        ds.features().to_vec(),
        ds.labels().to_vec(),
        ds.class_count(),
        head,
    )
}

/// Training and test objectives for one fold. `ds` must already be globally
/// normalized when `normalization` is `Global`.
pub fn fold_objectives(
    ds: &Dataset,
    plan: &FoldPlan,
    fold: usize,
    head: OutputHead,
    normalization: Normalization,
) -> Result<(ClassificationObjective, ClassificationObjective)> {
    let (mut train, mut test) = fold_split(ds, plan, fold)?;
    if normalization == Normalization::PerFold {
        let scaler = MinMaxScaler::fit(&train)?;
        train = scaler.transform(&train)?;
        test = scaler.transform(&test)?;
    }
    let decoding = WeightDecoding::new(topology_for(ds, head)?);
    Ok((objective(&train, &decoding, head)?, objective(&test, &decoding, head)?))
}

pub fn fold_plan_seed(root_seed: u64, dataset: &str, repetition: usize) -> u64 {
    derive_seed(root_seed, &[label_hash(dataset), repetition as u64])
}

pub fn cell_seed(seed: u64, dataset: &str, repetition: usize, fold: usize) -> u64 {
    derive_seed(seed, &[label_hash(dataset), repetition as u64, fold as u64])
}

/// Optimizer settings for one cell: defaults, then shared overrides, then the
/// algorithm's own.
pub fn optimizer_config(
    cfg: &ExperimentConfig,
    algorithm: &AlgorithmSpec,
    dimension: usize,
    seed: u64,
) -> Result<OptimizerConfig> {
    let bounds = Bounds::uniform(dimension, -cfg.weight_bound, cfg.weight_bound)?;
    let mut oc = OptimizerConfig::new(bounds, seed);
    cfg.optimizer.merged(&algorithm.overrides).apply(&mut oc)?;
    oc.execution = Execution::Sequential;
    Ok(oc)
}

/// Runs one algorithm on the training objective and returns test accuracy in
/// percent, measured with the historical best weights.
pub fn train_and_test(
    kind: AlgorithmKind,
    train: &ClassificationObjective,
    test: &ClassificationObjective,
    oc: &OptimizerConfig,
) -> Result<f64> {
    let trace = match kind {
        AlgorithmKind::CendeDobl => run_cende_dobl(train, oc)?,
        AlgorithmKind::De => run_de_baseline(train, oc)?,
    };
    Ok(100.0 - test.error(trace.final_best.position())?)
}

struct Prepared {
    data: Dataset,
    plans: Vec<FoldPlan>,
}

struct Cell {
    algorithm: usize,
    dataset: usize,
    repetition: usize,
    fold: usize,
}

fn prepare(cfg: &ExperimentConfig, diagnostics: &mut Vec<String>) -> Vec<(String, Prepared)> {
    let mut out = Vec::new();
    for entry in &cfg.datasets {
        let loaded = entry.load().and_then(|ds| {
            if let Err(e) = entry.check(&ds) {
                diagnostics.push(format!("warning: {e}"));
            }
            let ds = match cfg.normalization {
                Normalization::Global => normalize_minmax(&ds)?,
                Normalization::PerFold => ds,
            };
            let plans = (0..cfg.repetitions)
                .map(|r| stratified_kfold(&ds, cfg.k, fold_plan_seed(cfg.root_seed, &entry.name, r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Prepared { data: ds, plans })
        });
        match loaded {
            Ok(p) => {
                if p.data.dropped_rows > 0 {
                    diagnostics.push(format!(
                        "{}: dropped {} rows with missing or unparseable cells",
                        entry.name, p.data.dropped_rows
                    ));
                }
                if p.plans.iter().any(|pl| !pl.stratified) {
                    diagnostics.push(format!("{}: folds are not stratified", entry.name));
                }
                out.push((entry.name.clone(), p));
            }
            Err(e) => {
                log::error!("skipping {}: {e}", entry.name);
                diagnostics.push(format!("skipped {}: {e}", entry.name));
            }
        }
    }
    out
}

/// Runs the full grid. Datasets that fail to load are skipped and noted in
/// the report's diagnostics; optimizer failures abort the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut diagnostics = Vec::new();
    let prepared = prepare(cfg, &mut diagnostics);
    if prepared.is_empty() {
        return Err(Error::data(format!("no dataset could be loaded: {}", diagnostics.join("; "))));
    }

    let mut cells = Vec::new();
    for a in 0..cfg.algorithms.len() {
        for (d, (_, p)) in prepared.iter().enumerate() {
            for repetition in 0..cfg.repetitions {
                for fold in 0..p.plans[repetition].k {
                    cells.push(Cell {
                        algorithm: a,
                        dataset: d,
                        repetition,
                        fold,
                    });
                }
            }
        }
    }
    log::info!("running {} cells", cells.len());

    let results = cfg
        .execution
        .map(&cells, |c| {
            let (name, p) = &prepared[c.dataset];
            let spec = &cfg.algorithms[c.algorithm];
            let seed = cell_seed(cfg.seed_for(&spec.name, name), name, c.repetition, c.fold);
            let (train, test) = fold_objectives(&p.data, &p.plans[c.repetition], c.fold, cfg.head, cfg.normalization)?;
            let oc = optimizer_config(cfg, spec, train.decoding().parameter_count(), seed)?;
            let accuracy = train_and_test(spec.kind, &train, &test, &oc)?;
            log::debug!("{} {} rep {} fold {}: {accuracy:.2}", spec.name, name, c.repetition, c.fold);
            Ok(FoldResult {
                algorithm: spec.name.clone(),
                dataset: name.clone(),
                repetition: c.repetition,
                fold: c.fold,
                accuracy,
                seed,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut report = RunReport::from_results(
        cfg.algorithms.iter().map(|a| a.name.clone()).collect(),
        prepared.iter().map(|(n, _)| n.clone()).collect(),
        results,
    )?;
    report.dataset_info = prepared
        .iter()
        .map(|(name, p)| {
            let params = topology_for(&p.data, cfg.head).map_or(0, |t| t.parameter_count());
            DatasetInfo {
                name: name.clone(),
                samples: p.data.len(),
                features: p.data.dim(),
                classes: p.data.class_count(),
                dropped_rows: p.data.dropped_rows,
                parameters: params,
            }
        })
        .collect();
    report.diagnostics = diagnostics;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Manifest;
    use std::path::Path;

    fn small_config(algorithms: Vec<AlgorithmSpec>) -> ExperimentConfig {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
        let file = ConfigFile {
            datasets: vec!["iris".into()],
            algorithms,
            optimizer: OptimizerOverrides {
                population_size: Some(10),
                max_evaluations: Some(300),
                ..Default::default()
            },
            ..Default::default()
        };
        file.resolve_with(&Manifest::load(&dir.join("manifest.toml")).unwrap()).unwrap()
    }

    #[test]
    fn one_algorithm_ten_folds() {
        let report = run_experiment(&small_config(vec![AlgorithmSpec::cende_dobl()])).unwrap();
        assert_eq!(report.results.len(), 10);
        let s = report.summary("CenDE-DOBL", "iris").unwrap();
        assert_eq!(s.count, 10);
        assert!(s.mean.is_finite() && s.stddev.is_finite());
        assert_eq!(report.dataset_info[0].parameters, 55);
    }

    #[test]
    fn identical_specs_tie() {
        let mut twin = AlgorithmSpec::cende_dobl();
        twin.name = "twin".into();
        let report = run_experiment(&small_config(vec![AlgorithmSpec::cende_dobl(), twin])).unwrap();
        let (a, b) = report.results.split_at(10);
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x.accuracy, y.accuracy);
        }
        assert_eq!(report.ranks[0], vec![1.5, 1.5]);
    }

    #[test]
    fn seed_override_is_isolated() {
        let algs = vec![AlgorithmSpec::cende_dobl(), AlgorithmSpec::de()];
        let base = run_experiment(&small_config(algs.clone())).unwrap();
        let mut cfg = small_config(algs);
        cfg.seed_overrides.push(config::SeedOverride {
            algorithm: "DE".into(),
            dataset: "iris".into(),
            seed: 12345,
        });
        let moved = run_experiment(&cfg).unwrap();
        assert_eq!(base.results[..10], moved.results[..10]);
        assert_ne!(base.results[10..], moved.results[10..]);
    }

    #[test]
    fn missing_dataset_is_diagnosed() {
        let mut cfg = small_config(vec![AlgorithmSpec::de()]);
        let mut ghost = cfg.datasets[0].clone();
        ghost.name = "ghost".into();
        ghost.path = "/nonexistent/ghost.csv".into();
        cfg.datasets.push(ghost);
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.datasets, vec!["iris"]);
        assert!(report.diagnostics.iter().any(|d| d.contains("ghost")));
        cfg.datasets.remove(0);
        assert!(matches!(run_experiment(&cfg), Err(Error::Data(_))));
    }
}
