//! Fold results, per-dataset summaries and ranks, and their file formats.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::published::{self, PublishedTable};
use crate::error::{Error, Result};

/// One test-fold accuracy, the unit row of the long-form CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub algorithm: String,
    pub dataset: String,
    pub repetition: usize,
    pub fold: usize,
    /// Percent correct on the held-out fold.
    pub accuracy: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub algorithm: String,
    pub dataset: String,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation, divisor `count - 1`.
    pub stddev: f64,
}

/// Realized shape of a dataset as used in the run.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetInfo {
    pub name: String,
    pub samples: usize,
    pub features: usize,
    pub classes: usize,
    pub dropped_rows: usize,
    pub parameters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithms: Vec<String>,
    pub datasets: Vec<String>,
    pub results: Vec<FoldResult>,
    /// Algorithm-major: `summaries[a * datasets.len() + d]`.
    pub summaries: Vec<Summary>,
    /// `ranks[d][a]`, from mean accuracy, 1 is best.
    pub ranks: Vec<Vec<f64>>,
    pub average_ranks: Vec<f64>,
    pub dataset_info: Vec<DatasetInfo>,
    pub diagnostics: Vec<String>,
}

/// Mean and sample standard deviation. A single value has deviation 0.
pub fn mean_stddev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Fractional ranking: position 1 is the best value, and equal values share
/// the mean of the positions they cover.
pub fn compute_ranks(values: &[f64], higher_is_better: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let c = values[a].total_cmp(&values[b]);
        if higher_is_better {
            c.reverse()
        } else {
            c
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Column means of `ranks[d][a]` over datasets.
pub fn average_ranks(ranks: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = ranks.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|a| ranks.iter().map(|r| r[a]).sum::<f64>() / ranks.len() as f64)
        .collect()
}

impl RunReport {
    /// Aggregates fold results. Every (algorithm, dataset) pair needs at
    /// least one result.
    pub fn from_results(algorithms: Vec<String>, datasets: Vec<String>, results: Vec<FoldResult>) -> Result<Self> {
        let mut summaries = Vec::with_capacity(algorithms.len() * datasets.len());
        for a in &algorithms {
            for d in &datasets {
                let acc: Vec<f64> = results
                    .iter()
                    .filter(|r| &r.algorithm == a && &r.dataset == d)
                    .map(|r| r.accuracy)
                    .collect();
                if acc.is_empty() {
                    return Err(Error::data(format!("no results for {a} on {d}")));
                }
                let (mean, stddev) = mean_stddev(&acc);
                summaries.push(Summary {
                    algorithm: a.clone(),
                    dataset: d.clone(),
                    count: acc.len(),
                    mean,
                    stddev,
                });
            }
        }
        let nd = datasets.len();
        let ranks: Vec<Vec<f64>> = (0..nd)
            .map(|d| {
                let means: Vec<f64> = (0..algorithms.len()).map(|a| summaries[a * nd + d].mean).collect();
                compute_ranks(&means, true)
            })
            .collect();
        let average_ranks = average_ranks(&ranks);
        Ok(Self {
            algorithms,
            datasets,
            results,
            summaries,
            ranks,
            average_ranks,
            dataset_info: Vec::new(),
            diagnostics: Vec::new(),
        })
    }

    /// Rebuilds a report from rows, keeping first-appearance order of
    /// algorithms and datasets.
    pub fn from_rows(results: Vec<FoldResult>) -> Result<Self> {
        let mut algorithms: Vec<String> = Vec::new();
        let mut datasets: Vec<String> = Vec::new();
        for r in &results {
            if !algorithms.contains(&r.algorithm) {
                algorithms.push(r.algorithm.clone());
            }
            if !datasets.contains(&r.dataset) {
                datasets.push(r.dataset.clone());
            }
        }
        if results.is_empty() {
            return Err(Error::data("no result rows"));
        }
        Self::from_results(algorithms, datasets, results)
    }

    pub fn summary(&self, algorithm: &str, dataset: &str) -> Option<&Summary> {
        self.summaries
            .iter()
            .find(|s| s.algorithm == algorithm && s.dataset == dataset)
    }

    pub fn rank(&self, algorithm: &str, dataset: &str) -> Option<f64> {
        let a = self.algorithms.iter().position(|x| x == algorithm)?;
        let d = self.datasets.iter().position(|x| x == dataset)?;
        Some(self.ranks[d][a])
    }

    pub fn average_rank(&self, algorithm: &str) -> Option<f64> {
        let a = self.algorithms.iter().position(|x| x == algorithm)?;
        self.average_ranks.get(a).copied()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.results {
            w.serialize(r)?;
        }
        w.into_inner().map_err(|e| Error::data(e.to_string()))
    }

    /// Accuracy table in the published layout: mean, stddev and rank rows per
    /// algorithm, one column per dataset, average rank last.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let nd = self.datasets.len();
        let _ = writeln!(s, "# Cross-validated test accuracy (%)\n");
        let _ = writeln!(
            s,
            "stddev is the sample standard deviation over folds (divisor n - 1). \
             Rank 1 is best; ties share the average rank.\n"
        );
        let _ = writeln!(s, "| Algorithm | {} | Avg. rank |", self.datasets.join(" | "));
        let _ = writeln!(s, "|---|{}---|", "---|".repeat(nd));
        for (a, name) in self.algorithms.iter().enumerate() {
            let row = |f: &dyn Fn(usize) -> String| (0..nd).map(f).collect::<Vec<_>>().join(" | ");
            let _ = writeln!(s, "| {name} mean | {} |  |", row(&|d| format!("{:.2}", self.summaries[a * nd + d].mean)));
            let _ = writeln!(
                s,
                "| {name} stddev | {} |  |",
                row(&|d| format!("{:.2}", self.summaries[a * nd + d].stddev))
            );
            let _ = writeln!(
                s,
                "| {name} rank | {} | {:.2} |",
                row(&|d| fmt_rank(self.ranks[d][a])),
                self.average_ranks[a]
            );
        }

        if !self.dataset_info.is_empty() {
            let _ = writeln!(s, "\n## Datasets\n");
            let _ = writeln!(s, "| Dataset | Samples | Features | Classes | Dropped rows | Parameters |");
            let _ = writeln!(s, "|---|---|---|---|---|---|");
            for i in &self.dataset_info {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    i.name, i.samples, i.features, i.classes, i.dropped_rows, i.parameters
                );
            }
        }
        if !self.diagnostics.is_empty() {
            let _ = writeln!(s, "\n## Diagnostics\n");
            for d in &self.diagnostics {
                let _ = writeln!(s, "- {d}");
            }
        }
        s
    }
}

fn fmt_rank(r: f64) -> String {
    if r.fract() == 0.0 {
        format!("{r:.0}")
    } else {
        format!("{r}")
    }
}

/// A published table in the same layout, labelled as not reproduced.
pub fn published_markdown(table: &PublishedTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## {} ({})\n", table.title, published::DISCLAIMER);
    let _ = writeln!(s, "| Algorithm | {} | Avg. rank |", published::DATASETS.join(" | "));
    let _ = writeln!(s, "|---|{}---|", "---|".repeat(published::DATASETS.len()));
    for r in table.rows {
        let join = |v: &[f64; 6]| v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" | ");
        let ranks = r.rank.iter().map(|&x| fmt_rank(x)).collect::<Vec<_>>().join(" | ");
        let _ = writeln!(s, "| {} mean | {} |  |", r.algorithm, join(&r.mean));
        let _ = writeln!(s, "| {} stddev | {} |  |", r.algorithm, join(&r.stddev));
        let _ = writeln!(s, "| {} rank | {} | {:.2} |", r.algorithm, ranks, r.average_rank);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

/// Writes `results.csv` and/or `summary.md` into `dir`. The markdown file
/// ends with the published reference tables.
pub fn emit_report(report: &RunReport, dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for f in formats {
        let (path, bytes) = match f {
            ReportFormat::Csv => (dir.join("results.csv"), report.to_csv()?),
            ReportFormat::Markdown => {
                let mut md = report.to_markdown();
                for t in &published::TABLES {
                    md.push('\n');
                    md.push_str(&published_markdown(t));
                }
                (dir.join("summary.md"), md.into_bytes())
            }
        };
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

pub fn read_results_csv(path: &Path) -> Result<Vec<FoldResult>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<Vec<FoldResult>, _>>()
        .map_err(Error::from)
}
