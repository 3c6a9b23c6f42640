//! Preprocessed datasets: split, encode, impute, standardize.

use std::io::Write;
use std::path::Path;

use crate::data::raw::{RawColumn, RawTable};
use crate::data::schema::{FeatureKind, FeatureSchema};
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

/// Train/test row indices. Disjoint, sorted, together covering `0..n`.
#[derive(Debug, Clone)]
pub struct SplitIndices {
    train: Vec<usize>,
    test: Vec<usize>,
}

impl SplitIndices {
    pub fn train(&self) -> &[usize] {
        &self.train
    }

    pub fn test(&self) -> &[usize] {
        &self.test
    }
}

/// Fitted preprocessing statistics for one feature.
#[derive(Debug, Clone)]
pub enum FeatureStat {
    /// Population mean/std of the training column (std clamped to 1 for
    /// zero-variance columns); the processed column is `(x - mean) / std`.
    Continuous { mean: f64, std: f64 },
    /// Category names in code order (first appearance over training rows)
    /// plus the training mode used for imputation.
    Categorical {
        categories: Vec<String>,
        mode_code: usize,
    },
}

/// Everything fitted on the training split during preprocessing.
#[derive(Debug, Clone)]
pub struct PreprocessStats {
    pub per_feature: Vec<FeatureStat>,
    /// Class names in label-code order.
    pub label_classes: Vec<String>,
}

/// A fully preprocessed dataset: standardized features, integer labels,
/// the fitted statistics and the train/test split. Immutable once built.
#[derive(Debug, Clone)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<usize>,
    schema: FeatureSchema,
    split: SplitIndices,
    stats: PreprocessStats,
}

/// Draw an unstratified shuffled split: `floor(n * train_fraction)` training
/// rows, the rest test rows.
pub fn draw_split(n: usize, train_fraction: f64, rng: &mut Rng) -> Result<SplitIndices> {
    if !train_fraction.is_finite() || train_fraction <= 0.0 || train_fraction >= 1.0 {
        return Err(Error::Parameter(format!(
            "train_fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    if n < 2 {
        return Err(Error::Parameter(format!("need at least 2 rows, got {n}")));
    }
    let n_train = (n as f64 * train_fraction).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Parameter(format!(
            "split leaves an empty side: {n_train} train of {n} rows"
        )));
    }
    let order = rng.permutation(n);
    let mut train: Vec<usize> = order[..n_train].to_vec();
    let mut test: Vec<usize> = order[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test })
}

/// Numeric feature columns (missing cells still `None`) plus, per feature,
/// the category list in code order (`None` for continuous features).
pub type EncodedColumns = (Vec<Vec<Option<f64>>>, Vec<Option<Vec<String>>>);

/// Encode categorical columns as integer codes.
///
/// Codes are assigned in first-appearance order over the training rows
/// (ascending row index). A non-missing value that never occurs in the
/// training split is an encoding error. Returns the numeric columns (missing
/// cells still `None`) and, per feature, the category list in code order
/// (`None` for continuous features).
pub fn encode_categoricals(table: &RawTable, train: &[usize]) -> Result<EncodedColumns> {
    let mut numeric = Vec::with_capacity(table.n_features());
    let mut category_lists = Vec::with_capacity(table.n_features());
    for (spec, column) in table.schema().features.iter().zip(table.columns()) {
        match column {
            RawColumn::Continuous(col) => {
                numeric.push(col.clone());
                category_lists.push(None);
            }
            RawColumn::Categorical(col) => {
                let mut categories: Vec<String> = Vec::new();
                for &row in train {
                    if let Some(value) = &col[row] {
                        if !categories.iter().any(|c| c == value) {
                            categories.push(value.clone());
                        }
                    }
                }
                if categories.is_empty() {
                    return Err(Error::Encoding(format!(
                        "feature '{}' has no observed training categories",
                        spec.name
                    )));
                }
                let encoded: Vec<Option<f64>> = col
                    .iter()
                    .map(|cell| match cell {
                        None => Ok(None),
                        Some(value) => categories
                            .iter()
                            .position(|c| c == value)
                            .map(|code| Some(code as f64))
                            .ok_or_else(|| {
                                Error::Encoding(format!(
                                    "category '{value}' of feature '{}' was never seen in training",
                                    spec.name
                                ))
                            }),
                    })
                    .collect::<Result<_>>()?;
                numeric.push(encoded);
                category_lists.push(Some(categories));
            }
        }
    }
    Ok((numeric, category_lists))
}

fn encode_labels(raw: &[String]) -> Result<(Vec<usize>, Vec<String>)> {
    let mut classes: Vec<String> = raw.to_vec();
    classes.sort();
    classes.dedup();
    // Sort numerically when every class parses as a number, so "2" < "10".
    let parsed: Option<Vec<f64>> = classes.iter().map(|c| c.parse::<f64>().ok()).collect();
    if let Some(values) = parsed {
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        classes = order.iter().map(|&i| classes[i].clone()).collect();
    }
    if classes.len() < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 label classes, found {}",
            classes.len()
        )));
    }
    let labels = raw
        .iter()
        .map(|value| {
            classes
                .iter()
                .position(|c| c == value)
                .expect("class list covers all labels")
        })
        .collect();
    Ok((labels, classes))
}

/// Split, encode, impute and standardize a raw table into a [`Dataset`].
///
/// Order of operations: draw the shuffled split, encode categoricals using
/// training first-appearance order, impute surviving missing cells with the
/// training mean (continuous) or mode (categorical), then standardize each
/// continuous column with training-population statistics applied to all rows.
pub fn split_train_test(table: &RawTable, train_fraction: f64, rng: &mut Rng) -> Result<Dataset> {
    let n = table.n_rows();
    let split = draw_split(n, train_fraction, rng)?;
    let (mut numeric, category_lists) = encode_categoricals(table, split.train())?;

    let mut per_feature = Vec::with_capacity(table.n_features());
    for (j, spec) in table.schema().features.iter().enumerate() {
        let column = &mut numeric[j];
        match spec.kind {
            FeatureKind::Continuous => {
                let observed: Vec<f64> = split
                    .train()
                    .iter()
                    .filter_map(|&row| column[row])
                    .collect();
                if observed.is_empty() {
                    return Err(Error::Data(format!(
                        "feature '{}' has no observed training values to impute from",
                        spec.name
                    )));
                }
                let mean = observed.iter().sum::<f64>() / observed.len() as f64;
                for cell in column.iter_mut() {
                    if cell.is_none() {
                        *cell = Some(mean);
                    }
                }
                // Standardization stats are fitted after imputation, train
                // rows only, population std.
                let train_values: Vec<f64> = split
                    .train()
                    .iter()
                    .map(|&row| column[row].unwrap())
                    .collect();
                let mean = train_values.iter().sum::<f64>() / train_values.len() as f64;
                let var = train_values
                    .iter()
                    .map(|v| (v - mean).powi(2))
                    .sum::<f64>()
                    / train_values.len() as f64;
                let std = if var.sqrt() > 0.0 { var.sqrt() } else { 1.0 };
                for cell in column.iter_mut() {
                    *cell = Some((cell.unwrap() - mean) / std);
                }
                per_feature.push(FeatureStat::Continuous { mean, std });
            }
            FeatureKind::Categorical => {
                let categories = category_lists[j]
                    .clone()
                    .expect("categorical feature has category list");
                let mut counts = vec![0usize; categories.len()];
                for &row in split.train() {
                    if let Some(code) = column[row] {
                        counts[code as usize] += 1;
                    }
                }
                let mode_code = counts
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .map(|(code, _)| code)
                    .unwrap_or(0);
                for cell in column.iter_mut() {
                    if cell.is_none() {
                        *cell = Some(mode_code as f64);
                    }
                }
                per_feature.push(FeatureStat::Categorical {
                    categories,
                    mode_code,
                });
            }
        }
    }

    let mut features = Matrix::zeros(n, table.n_features());
    for (j, column) in numeric.iter().enumerate() {
        for (i, cell) in column.iter().enumerate() {
            features.set(i, j, cell.expect("all cells imputed"));
        }
    }
    let (labels, label_classes) = encode_labels(table.labels())?;

    Ok(Dataset {
        features,
        labels,
        schema: table.schema().clone(),
        split,
        stats: PreprocessStats {
            per_feature,
            label_classes,
        },
    })
}

impl Dataset {
    /// Low-level constructor from already processed parts.
    ///
    /// Shape and split invariants are validated; the caller vouches for the
    /// statistics actually matching the matrix.
    pub fn from_parts(
        features: Matrix,
        labels: Vec<usize>,
        schema: FeatureSchema,
        train: Vec<usize>,
        test: Vec<usize>,
        stats: PreprocessStats,
    ) -> Result<Dataset> {
        let n = features.rows();
        if labels.len() != n {
            return Err(Error::Shape(format!("{n} rows but {} labels", labels.len())));
        }
        if schema.n_features() != features.cols() || stats.per_feature.len() != features.cols() {
            return Err(Error::Shape(
                "schema/stats width does not match the matrix".into(),
            ));
        }
        let mut cover: Vec<usize> = train.iter().chain(&test).copied().collect();
        cover.sort_unstable();
        if cover != (0..n).collect::<Vec<_>>() {
            return Err(Error::Parameter(
                "train and test indices must disjointly cover all rows".into(),
            ));
        }
        if labels.iter().any(|&l| l >= stats.label_classes.len()) {
            return Err(Error::Parameter("label code out of class range".into()));
        }
        let mut train = train;
        let mut test = test;
        train.sort_unstable();
        test.sort_unstable();
        Ok(Dataset {
            features,
            labels,
            schema,
            split: SplitIndices { train, test },
            stats,
        })
    }

    /// Build a dataset from an already numeric, fully observed matrix.
    ///
    /// Only all-continuous schemas are supported here; tables with
    /// categorical features go through [`split_train_test`]. Standardization
    /// still happens (train-population statistics).
    pub fn from_numeric(
        raw: Matrix,
        labels: Vec<usize>,
        label_classes: Vec<String>,
        schema: FeatureSchema,
        train_fraction: f64,
        rng: &mut Rng,
    ) -> Result<Dataset> {
        if raw.rows() != labels.len() {
            return Err(Error::Shape(format!(
                "{} rows but {} labels",
                raw.rows(),
                labels.len()
            )));
        }
        if raw.cols() != schema.n_features() {
            return Err(Error::Shape(format!(
                "{} columns but schema has {} features",
                raw.cols(),
                schema.n_features()
            )));
        }
        if schema
            .features
            .iter()
            .any(|f| f.kind != FeatureKind::Continuous)
        {
            return Err(Error::Parameter(
                "from_numeric requires an all-continuous schema".into(),
            ));
        }
        if label_classes.len() < 2 || labels.iter().any(|&l| l >= label_classes.len()) {
            return Err(Error::Parameter("labels out of class range".into()));
        }
        let split = draw_split(raw.rows(), train_fraction, rng)?;

        let mut features = raw;
        let mut per_feature = Vec::with_capacity(features.cols());
        for j in 0..features.cols() {
            let train_values: Vec<f64> =
                split.train().iter().map(|&i| features.get(i, j)).collect();
            let mean = train_values.iter().sum::<f64>() / train_values.len() as f64;
            let var = train_values
                .iter()
                .map(|v| (v - mean).powi(2))
                .sum::<f64>()
                / train_values.len() as f64;
            let std = if var.sqrt() > 0.0 { var.sqrt() } else { 1.0 };
            for i in 0..features.rows() {
                features.set(i, j, (features.get(i, j) - mean) / std);
            }
            per_feature.push(FeatureStat::Continuous { mean, std });
        }

        Ok(Dataset {
            features,
            labels,
            schema,
            split,
            stats: PreprocessStats {
                per_feature,
                label_classes,
            },
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn n_classes(&self) -> usize {
        self.stats.label_classes.len()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn split(&self) -> &SplitIndices {
        &self.split
    }

    pub fn train_indices(&self) -> &[usize] {
        self.split.train()
    }

    pub fn test_indices(&self) -> &[usize] {
        self.split.test()
    }

    pub fn stats(&self) -> &PreprocessStats {
        &self.stats
    }

    pub fn class_name(&self, code: usize) -> &str {
        &self.stats.label_classes[code]
    }

    /// Per-feature valid ranges in processed units.
    ///
    /// A schema-declared range is mapped through the fitted standardization;
    /// otherwise the range is the training column min/max. Categorical
    /// features span their code range `[0, k-1]`.
    pub fn valid_ranges(&self) -> Vec<(f64, f64)> {
        (0..self.n_features())
            .map(|j| match &self.stats.per_feature[j] {
                FeatureStat::Continuous { mean, std } => {
                    if let Some((lo, hi)) = self.schema.feature(j).range {
                        ((lo - mean) / std, (hi - mean) / std)
                    } else {
                        let mut lo = f64::INFINITY;
                        let mut hi = f64::NEG_INFINITY;
                        for &i in self.split.train() {
                            let v = self.features.get(i, j);
                            lo = lo.min(v);
                            hi = hi.max(v);
                        }
                        (lo, hi)
                    }
                }
                FeatureStat::Categorical { categories, .. } => {
                    (0.0, (categories.len() - 1) as f64)
                }
            })
            .collect()
    }

    /// Write the processed matrix and class names to CSV (full-precision,
    /// shortest round-trip float rendering).
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let names = self.schema.feature_names();
        writeln!(out, "{},{}", names.join(","), self.schema.label)?;
        for i in 0..self.n_rows() {
            let cells: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(
                out,
                "{},{}",
                cells.join(","),
                self.class_name(self.labels[i])
            )?;
        }
        Ok(())
    }
}

/// Read back a numeric CSV produced by [`Dataset::write_csv`]: the matrix,
/// the raw label strings and the feature column names.
pub fn read_numeric_csv(
    path: impl AsRef<Path>,
    label_column: &str,
) -> Result<(Matrix, Vec<String>, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(|e| Error::Schema(format!("cannot open csv: {e}")))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(format!("cannot read header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let label_pos = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Schema(format!("no label column '{label_column}'")))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_pos)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            Error::Schema(format!("csv read failure at row {}: {e}", row_idx + 1))
        })?;
        let mut row = Vec::with_capacity(feature_names.len());
        for (i, cell) in record.iter().enumerate() {
            if i == label_pos {
                labels.push(cell.to_owned());
            } else {
                row.push(cell.parse::<f64>().map_err(|_| Error::Ingestion {
                    row: row_idx + 1,
                    column: headers[i].clone(),
                    message: format!("cannot parse '{cell}' as a number"),
                })?);
            }
        }
        rows.push(row);
    }
    Ok((Matrix::from_rows(&rows)?, labels, feature_names))
}

/// Stratified sample of `n` test rows: per-class counts follow the class
/// frequencies of the test split, rounded by largest remainder, with rows
/// drawn without replacement inside each class.
pub fn stratified_sample(dataset: &Dataset, n: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    let pool = dataset.test_indices();
    if n > pool.len() {
        return Err(Error::Parameter(format!(
            "requested {n} rows from a test split of {}",
            pool.len()
        )));
    }
    let n_classes = dataset.n_classes();
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for &row in pool {
        per_class[dataset.labels()[row]].push(row);
    }

    let total = pool.len() as f64;
    let exact: Vec<f64> = per_class
        .iter()
        .map(|rows| n as f64 * rows.len() as f64 / total)
        .collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..n_classes).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &class in order.iter().take(n - assigned) {
        counts[class] += 1;
    }

    let mut sample = Vec::with_capacity(n);
    for (class, rows) in per_class.iter().enumerate() {
        if counts[class] == 0 {
            continue;
        }
        let picks = rng.sample_without_replacement(rows.len(), counts[class])?;
        sample.extend(picks.into_iter().map(|p| rows[p]));
    }
    sample.sort_unstable();
    Ok(sample)
}
