//! Feature schemas and their on-disk TOML format.
//!
//! A schema file names the label column and describes each feature:
//!
//! ```toml
//! label = "outcome"
//!
//! [[feature]]
//! name = "age"
//! kind = "continuous"
//! # range = [0.0, 120.0]        # optional; otherwise derived from training data
//!
//! [[feature]]
//! name = "charge_degree"
//! kind = "categorical"
//! # categories = ["F", "M"]     # optional; otherwise learned from training data
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    /// Declared valid range for a continuous feature, in raw (pre-scaling)
    /// units.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(f64, f64)>,
    /// Declared category set for a categorical feature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<String>>,
}

impl FeatureSpec {
    pub fn continuous(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Continuous,
            range: None,
            categories: None,
        }
    }

    pub fn categorical(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Categorical,
            range: None,
            categories: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSchema {
    /// Name of the label column in the CSV.
    pub label: String,
    #[serde(rename = "feature")]
    pub features: Vec<FeatureSpec>,
}

impl FeatureSchema {
    pub fn new(label: impl Into<String>, features: Vec<FeatureSpec>) -> Result<Self> {
        let schema = Self {
            label: label.into(),
            features,
        };
        schema.validate()?;
        Ok(schema)
    }

    /// All-continuous schema with the given feature names.
    pub fn all_continuous(label: impl Into<String>, names: &[String]) -> Result<Self> {
        Self::new(
            label,
            names.iter().map(FeatureSpec::continuous).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() {
            return Err(Error::Schema("schema declares no features".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.features {
            if f.name == self.label {
                return Err(Error::Schema(format!(
                    "feature '{}' collides with the label column",
                    f.name
                )));
            }
            if !seen.insert(f.name.as_str()) {
                return Err(Error::Schema(format!("duplicate feature name '{}'", f.name)));
            }
            match f.kind {
                FeatureKind::Continuous => {
                    if f.categories.is_some() {
                        return Err(Error::Schema(format!(
                            "continuous feature '{}' declares categories",
                            f.name
                        )));
                    }
                    if let Some((lo, hi)) = f.range {
                        if !lo.is_finite() || !hi.is_finite() || lo > hi {
                            return Err(Error::Schema(format!(
                                "feature '{}' has invalid range [{lo}, {hi}]",
                                f.name
                            )));
                        }
                    }
                }
                FeatureKind::Categorical => {
                    if f.range.is_some() {
                        return Err(Error::Schema(format!(
                            "categorical feature '{}' declares a numeric range",
                            f.name
                        )));
                    }
                    if let Some(cats) = &f.categories {
                        if cats.is_empty() {
                            return Err(Error::Schema(format!(
                                "feature '{}' declares an empty category set",
                                f.name
                            )));
                        }
                        let unique: std::collections::BTreeSet<_> = cats.iter().collect();
                        if unique.len() != cats.len() {
                            return Err(Error::Schema(format!(
                                "feature '{}' declares duplicate categories",
                                f.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn feature(&self, index: usize) -> &FeatureSpec {
        &self.features[index]
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let schema: FeatureSchema =
            toml::from_str(text).map_err(|e| Error::Schema(format!("schema parse: {e}")))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("schema serialises")
    }
}
