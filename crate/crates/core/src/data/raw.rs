//! CSV ingestion and missing-feature removal.

use std::path::Path;

use crate::data::schema::{FeatureKind, FeatureSchema};
use crate::error::{Error, Result};

/// One ingested feature column, cells still unencoded. `None` marks a
/// missing cell.
#[derive(Debug, Clone)]
pub enum RawColumn {
    Continuous(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl RawColumn {
    pub fn len(&self) -> usize {
        match self {
            RawColumn::Continuous(v) => v.len(),
            RawColumn::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn missing_count(&self) -> usize {
        match self {
            RawColumn::Continuous(v) => v.iter().filter(|c| c.is_none()).count(),
            RawColumn::Categorical(v) => v.iter().filter(|c| c.is_none()).count(),
        }
    }
}

/// A parsed table: one column per schema feature plus the raw label strings.
/// This is the stage between the CSV file and a preprocessed [`crate::data::Dataset`];
/// missing cells stay marked until the train/test split exists, because
/// imputation statistics are fitted on training rows only.
#[derive(Debug, Clone)]
pub struct RawTable {
    schema: FeatureSchema,
    columns: Vec<RawColumn>,
    labels: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FeatureMissingness {
    pub name: String,
    pub missing: usize,
    pub total: usize,
    pub dropped: bool,
}

/// Per-feature record of what `drop_high_missing` decided.
#[derive(Debug, Clone)]
pub struct MissingnessReport {
    pub threshold: usize,
    pub features: Vec<FeatureMissingness>,
}

impl RawTable {
    /// Parse a CSV file against `schema`.
    ///
    /// The header must contain exactly the schema's feature names plus the
    /// label column, in any order. Cells equal to `missing_token` (after
    /// trimming) are recorded as missing; when a categorical feature declares
    /// a category set, values outside it are rejected here.
    pub fn load_csv(
        path: impl AsRef<Path>,
        schema: &FeatureSchema,
        missing_token: &str,
    ) -> Result<RawTable> {
        schema.validate()?;
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

        let position = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Schema(format!("header is missing column '{name}'")))
        };
        let feature_pos: Vec<usize> = schema
            .features
            .iter()
            .map(|f| position(&f.name))
            .collect::<Result<_>>()?;
        let label_pos = position(&schema.label)?;

        let mut expected: Vec<&str> = schema.feature_names();
        expected.push(&schema.label);
        for h in &headers {
            if !expected.contains(&h.as_str()) {
                return Err(Error::Schema(format!(
                    "header column '{h}' is not in the schema"
                )));
            }
        }

        let mut columns: Vec<RawColumn> = schema
            .features
            .iter()
            .map(|f| match f.kind {
                FeatureKind::Continuous => RawColumn::Continuous(Vec::new()),
                FeatureKind::Categorical => RawColumn::Categorical(Vec::new()),
            })
            .collect();
        let mut labels = Vec::new();

        for (row_idx, record) in reader.records().enumerate() {
            let row = row_idx + 1; // 1-based data rows
            let record =
                record.map_err(|e| Error::Schema(format!("csv read failure at row {row}: {e}")))?;
            for (j, feature) in schema.features.iter().enumerate() {
                let cell = record.get(feature_pos[j]).unwrap_or("").trim();
                let missing = cell == missing_token;
                match (&mut columns[j], feature.kind) {
                    (RawColumn::Continuous(col), FeatureKind::Continuous) => {
                        if missing {
                            col.push(None);
                        } else {
                            let value: f64 = cell.parse().map_err(|_| Error::Ingestion {
                                row,
                                column: feature.name.clone(),
                                message: format!("cannot parse '{cell}' as a number"),
                            })?;
                            if !value.is_finite() {
                                return Err(Error::Ingestion {
                                    row,
                                    column: feature.name.clone(),
                                    message: format!("non-finite value '{cell}'"),
                                });
                            }
                            col.push(Some(value));
                        }
                    }
                    (RawColumn::Categorical(col), FeatureKind::Categorical) => {
                        if missing {
                            col.push(None);
                        } else {
                            if let Some(cats) = &feature.categories {
                                if !cats.iter().any(|c| c == cell) {
                                    return Err(Error::Ingestion {
                                        row,
                                        column: feature.name.clone(),
                                        message: format!(
                                            "value '{cell}' is not in the declared category set"
                                        ),
                                    });
                                }
                            }
                            col.push(Some(cell.to_owned()));
                        }
                    }
                    _ => unreachable!("column kind matches schema by construction"),
                }
            }
            let label_cell = record.get(label_pos).unwrap_or("").trim();
            if label_cell == missing_token || label_cell.is_empty() {
                return Err(Error::Ingestion {
                    row,
                    column: schema.label.clone(),
                    message: "label cell is missing".into(),
                });
            }
            labels.push(label_cell.to_owned());
        }

        if labels.is_empty() {
            return Err(Error::EmptyDataset("csv contains no data rows".into()));
        }
        Ok(RawTable {
            schema: schema.clone(),
            columns,
            labels,
        })
    }

    /// Build a table directly from columns (used by tests and generators).
    pub fn from_columns(
        schema: FeatureSchema,
        columns: Vec<RawColumn>,
        labels: Vec<String>,
    ) -> Result<RawTable> {
        schema.validate()?;
        if columns.len() != schema.n_features() {
            return Err(Error::Shape(format!(
                "{} columns for {} schema features",
                columns.len(),
                schema.n_features()
            )));
        }
        if columns.iter().any(|c| c.len() != labels.len()) {
            return Err(Error::Shape("column lengths disagree with labels".into()));
        }
        Ok(RawTable {
            schema,
            columns,
            labels,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn columns(&self) -> &[RawColumn] {
        &self.columns
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn missing_counts(&self) -> Vec<usize> {
        self.columns.iter().map(RawColumn::missing_count).collect()
    }

    /// A new table containing only the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<RawTable> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.n_rows()) {
            return Err(Error::Parameter(format!(
                "row {bad} out of range for {} rows",
                self.n_rows()
            )));
        }
        let columns = self
            .columns
            .iter()
            .map(|column| match column {
                RawColumn::Continuous(col) => {
                    RawColumn::Continuous(rows.iter().map(|&r| col[r]).collect())
                }
                RawColumn::Categorical(col) => {
                    RawColumn::Categorical(rows.iter().map(|&r| col[r].clone()).collect())
                }
            })
            .collect();
        let labels = rows.iter().map(|&r| self.labels[r].clone()).collect();
        Ok(RawTable {
            schema: self.schema.clone(),
            columns,
            labels,
        })
    }

    /// Remove every feature whose missing count exceeds `threshold`.
    ///
    /// Surviving columns keep their missing marks; they are imputed from
    /// train-split statistics when the table is split into a `Dataset`.
    pub fn drop_high_missing(self, threshold: usize) -> Result<(RawTable, MissingnessReport)> {
        let total = self.n_rows();
        let mut report = MissingnessReport {
            threshold,
            features: Vec::with_capacity(self.columns.len()),
        };
        let mut kept_features = Vec::new();
        let mut kept_columns = Vec::new();
        for (spec, column) in self.schema.features.iter().zip(self.columns) {
            let missing = column.missing_count();
            let dropped = missing > threshold;
            report.features.push(FeatureMissingness {
                name: spec.name.clone(),
                missing,
                total,
                dropped,
            });
            if !dropped {
                kept_features.push(spec.clone());
                kept_columns.push(column);
            }
        }
        if kept_columns.is_empty() {
            return Err(Error::EmptyDataset(format!(
                "all {} features exceed the missing threshold {threshold}",
                report.features.len()
            )));
        }
        let schema = FeatureSchema::new(self.schema.label, kept_features)?;
        Ok((
            RawTable {
                schema,
                columns: kept_columns,
                labels: self.labels,
            },
            report,
        ))
    }
}
