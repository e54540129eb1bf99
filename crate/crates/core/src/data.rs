//! Dataset ingestion, min-max scaling, and stratified k-fold planning.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{derive_seed, label_hash, rng_from_seed};

/// Numeric features with dense class labels. Features are row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    features: Vec<f64>,
    dim: usize,
    labels: Vec<usize>,
    class_count: usize,
    pub feature_names: Vec<String>,
    /// Original label text, indexed by class.
    pub class_names: Vec<String>,
    /// Rows skipped during ingestion.
    pub dropped_rows: usize,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        features: Vec<f64>,
        dim: usize,
        labels: Vec<usize>,
        class_count: usize,
    ) -> Result<Self> {
        if labels.is_empty() || dim == 0 {
            return Err(Error::EmptySamples);
        }
        if features.len() != labels.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: labels.len() * dim,
                found: features.len(),
            });
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::data("non-finite feature value"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::data(format!("label {bad} outside [0, {class_count})")));
        }
        Ok(Self {
            name: name.into(),
            features,
            dim,
            labels,
            class_count,
            feature_names: (0..dim).map(|j| format!("x{j}")).collect(),
            class_names: (0..class_count).map(|c| c.to_string()).collect(),
            dropped_rows: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Rows at `indices`, in that order. Class indexing is kept even if a
    /// class ends up absent.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Dataset {
            features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Dataset {
        Dataset {
            name: self.name.clone(),
            features: Vec::new(),
            dim: self.dim,
            labels: Vec::new(),
            class_count: self.class_count,
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            dropped_rows: self.dropped_rows,
        }
    }
}

/// Which column holds the class label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelColumn {
    #[default]
    Last,
    #[serde(untagged)]
    Index(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvSchema {
    pub label_column: LabelColumn,
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            label_column: LabelColumn::Last,
            delimiter: b',',
            has_header: false,
        }
    }
}

/// Reads a delimited file. Rows with a wrong field count or an unparseable
/// feature cell are dropped and counted; labels get dense indices in order of
/// first appearance.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_csv(&name, &bytes, schema)
}

pub fn parse_csv(name: &str, bytes: &[u8], schema: &CsvSchema) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(schema.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let header: Option<Vec<String>> = if schema.has_header {
        Some(reader.headers()?.iter().map(str::to_owned).collect())
    } else {
        None
    };

    let mut width = header.as_ref().map(Vec::len);
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut dropped = 0;

    for record in reader.records() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w || w < 2 {
            dropped += 1;
            continue;
        }
        let label_at = match schema.label_column {
            LabelColumn::Last => w - 1,
            LabelColumn::Index(i) if i < w => i,
            LabelColumn::Index(i) => {
                return Err(Error::data(format!("label column {i} outside {w} columns")));
            }
        };
        let row: Option<Vec<f64>> = record
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != label_at)
            .map(|(_, cell)| cell.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        let label = &record[label_at];
        let Some(row) = row.filter(|_| !label.is_empty()) else {
            dropped += 1;
            continue;
        };
        let next = class_names.len();
        let class = *class_index.entry(label.to_owned()).or_insert_with(|| {
            class_names.push(label.to_owned());
            next
        });
        features.extend(row);
        labels.push(class);
    }

    let Some(w) = width.filter(|_| !labels.is_empty()) else {
        return Err(Error::data(format!("{name}: no valid rows")));
    };
    let label_at = match schema.label_column {
        LabelColumn::Last => w - 1,
        LabelColumn::Index(i) => i,
    };
    let mut ds = Dataset::new(name, features, w - 1, labels, class_names.len())?;
    if let Some(h) = header {
        ds.feature_names = h.into_iter().enumerate().filter(|&(j, _)| j != label_at).map(|(_, s)| s).collect();
    }
    ds.class_names = class_names;
    ds.dropped_rows = dropped;
    Ok(ds)
}

/// Per-feature minimum and maximum, fitted on one dataset and applicable to
/// another.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(ds: &Dataset) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut min = vec![f64::INFINITY; ds.dim()];
        let mut max = vec![f64::NEG_INFINITY; ds.dim()];
        for row in ds.features().chunks_exact(ds.dim()) {
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Self { min, max })
    }

    /// `(x - min) / (max - min)`; constant columns map to 0.
    pub fn transform(&self, ds: &Dataset) -> Result<Dataset> {
        if ds.dim() != self.min.len() {
            return Err(Error::DimensionMismatch {
                expected: self.min.len(),
                found: ds.dim(),
            });
        }
        let mut out = ds.clone();
        for row in out.features.chunks_exact_mut(self.min.len()) {
            for ((v, &lo), &hi) in row.iter_mut().zip(&self.min).zip(&self.max) {
                *v = if hi > lo { (*v - lo) / (hi - lo) } else { 0.0 };
            }
        }
        Ok(out)
    }
}

pub fn normalize_minmax(ds: &Dataset) -> Result<Dataset> {
    MinMaxScaler::fit(ds)?.transform(ds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
    /// False when some class had fewer than `k` members.
    pub stratified: bool,
}

impl FoldPlan {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles each class with a seeded generator and deals its members to folds
/// round-robin, continuing the count from class to class so overall fold sizes
/// also differ by at most one. Falls back to dealing a single shuffled list
/// when a class is smaller than `k`.
pub fn stratified_kfold(ds: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    if k == 0 || k > ds.len() {
        return Err(Error::config(format!("{k} folds for {} samples", ds.len())));
    }
    let mut rng = rng_from_seed(derive_seed(seed, &[label_hash("kfold"), k as u64]));
    let sizes = ds.class_sizes();
    let stratified = sizes.iter().all(|&s| s == 0 || s >= k);
    let groups: Vec<Vec<usize>> = if stratified {
        (0..ds.class_count())
            .map(|c| (0..ds.len()).filter(|&i| ds.labels()[i] == c).collect())
            .collect()
    } else {
        log::warn!(
            "{}: a class has fewer than {k} members, folds are not stratified",
            ds.name
        );
        vec![(0..ds.len()).collect()]
    };

    let mut assignments = vec![0; ds.len()];
    let mut next = 0;
    for mut group in groups {
        group.shuffle(&mut rng);
        for i in group {
            assignments[i] = next % k;
            next += 1;
        }
    }
    Ok(FoldPlan {
        k,
        assignments,
        stratified,
    })
}

/// `(train, test)` with fold `test_fold` held out; row order is preserved.
pub fn fold_split(ds: &Dataset, plan: &FoldPlan, test_fold: usize) -> Result<(Dataset, Dataset)> {
    if plan.assignments.len() != ds.len() {
        return Err(Error::DimensionMismatch {
            expected: ds.len(),
            found: plan.assignments.len(),
        });
    }
    if test_fold >= plan.k {
        return Err(Error::config(format!("fold {test_fold} not in [0, {})", plan.k)));
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| plan.assignments[i] == test_fold);
    Ok((ds.subset(&train), ds.subset(&test)))
}

/// Sample, feature and class counts a file is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedShape {
    pub samples: usize,
    pub features: usize,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    /// Relative paths resolve against the manifest's directory.
    pub path: PathBuf,
    #[serde(default)]
    pub label_column: LabelColumn,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default)]
    pub header: bool,
    pub expected: Option<ExpectedShape>,
}

fn default_delimiter() -> char {
    ','
}

impl DatasetEntry {
    pub fn schema(&self) -> Result<CsvSchema> {
        let delimiter = u8::try_from(self.delimiter)
            .map_err(|_| Error::config(format!("{}: delimiter must be ASCII", self.name)))?;
        Ok(CsvSchema {
            label_column: self.label_column,
            delimiter,
            has_header: self.header,
        })
    }

    pub fn load(&self) -> Result<Dataset> {
        let mut ds = load_csv(&self.path, &self.schema()?)?;
        ds.name = self.name.clone();
        Ok(ds)
    }

    /// Compares a loaded dataset with `expected`. Rows dropped during
    /// ingestion count towards the expected sample total.
    pub fn check(&self, ds: &Dataset) -> Result<()> {
        let Some(e) = self.expected else {
            return Ok(());
        };
        let got = (ds.len() + ds.dropped_rows, ds.dim(), ds.class_count());
        if got != (e.samples, e.features, e.classes) {
            return Err(Error::data(format!(
                "{}: expected (n, D, C) = ({}, {}, {}), found ({}, {}, {})",
                self.name, e.samples, e.features, e.classes, got.0, got.1, got.2
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
}

impl Manifest {
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut m: Manifest = toml::from_str(text)?;
        for d in &mut m.datasets {
            if d.path.is_relative() {
                d.path = base.join(&d.path);
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn get(&self, name: &str) -> Option<&DatasetEntry> {
        self.datasets.iter().find(|d| d.name.eq_ignore_ascii_case(name))
    }
}
