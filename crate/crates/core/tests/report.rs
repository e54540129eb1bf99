use std::path::Path;

use cende::bench::report::read_results_csv;
use cende::bench::{emit_report, run_experiment, AlgorithmSpec, ConfigFile, OptimizerOverrides, ReportFormat, RunReport};
use cende::data::Manifest;

#[test]
fn csv_round_trip_recomputes_summaries() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/manifest.toml");
    let file = ConfigFile {
        datasets: vec!["iris".into(), "liver".into()],
        algorithms: vec![AlgorithmSpec::cende_dobl(), AlgorithmSpec::de()],
        k: 5,
        optimizer: OptimizerOverrides {
            population_size: Some(8),
            max_evaluations: Some(150),
            ..Default::default()
        },
        ..Default::default()
    };
    let cfg = file.resolve_with(&Manifest::load(&manifest).unwrap()).unwrap();
    let report = run_experiment(&cfg).unwrap();

    let dir = tempfile::tempdir().unwrap();
    emit_report(&report, dir.path(), &[ReportFormat::Csv, ReportFormat::Markdown]).unwrap();
    let rows = read_results_csv(&dir.path().join("results.csv")).unwrap();
    assert_eq!(rows, report.results);

    for s in &report.summaries {
        let acc: Vec<f64> = rows
            .iter()
            .filter(|r| r.algorithm == s.algorithm && r.dataset == s.dataset)
            .map(|r| r.accuracy)
            .collect();
        let n = acc.len() as f64;
        let mean = acc.iter().sum::<f64>() / n;
        let var = acc.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert_eq!(s.count, 5);
        assert!((s.mean - mean).abs() < 1e-9);
        assert!((s.stddev - var.sqrt()).abs() < 1e-9);
    }

    let again = RunReport::from_rows(rows).unwrap();
    assert_eq!(again.ranks, report.ranks);
    assert_eq!(again.average_ranks, report.average_ranks);
    assert_eq!(again.summaries, report.summaries);
}
