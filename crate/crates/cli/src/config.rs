//! Experiment configuration: one declarative TOML file describing datasets,
//! model, baselines, attribution methods and the ablation protocol.
//!
//! ```toml
//! master_seed = 42
//! output_dir = "runs/demo"
//!
//! [model]
//! hidden_units = 32
//! learning_rate = 0.05
//! epochs = 50
//! batch_size = 32
//!
//! [attribution]
//! methods = ["ig", "deeplift", "kernel_shap", "deep_shap"]
//! ig_steps = 300
//! kshap_samples = 2048
//! kshap_exhaustive_threshold = 12
//! kshap_value = "probability"
//! deepshap_background_size = 20
//! baseline_draws = 1
//!
//! [ablation]
//! k_grid = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0]
//! ranking = "signed"
//! repeats = 10
//!
//! [[datasets]]
//! name = "synth"
//! synthetic = { rows = 2000, features = 10, informative = [0, 1] }
//!
//! [[datasets]]
//! name = "compas_like"
//! csv = "data/compas.csv"                 # relative to the config file
//! schema = "data/compas.schema.toml"
//! train_fraction = 0.8
//! missing_token = "NA"
//! missing_threshold = 1000                # drop features with more misses
//! row_subsample = 5000                    # optional
//! eval_sample = 400                       # optional stratified eval subset
//!
//! [[baselines]]
//! method = "constant"                     # value = 0.0 or [..] optional
//! [[baselines]]
//! method = "max_distance"
//! [[baselines]]
//! method = "blurred"                      # sigma, radius, permutations
//! [[baselines]]
//! method = "gaussian"                     # sigma
//! [[baselines]]
//! method = "uniform"                      # ranges optional
//! [[baselines]]
//! method = "expectation"                  # sample_size
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use tabattr_core::ablation::RankingMode;
use tabattr_core::attribution::{AttributionConfig, AttributionMethod};
use tabattr_core::baselines::BaselineSpec;
use tabattr_core::data::{FeatureKind, FeatureSchema};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let d = tabattr_core::model::TrainConfig::default();
        Self {
            hidden_units: d.hidden_units,
            learning_rate: d.learning_rate,
            epochs: d.epochs,
            batch_size: d.batch_size,
        }
    }
}

fn default_methods() -> Vec<AttributionMethod> {
    AttributionMethod::all().to_vec()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributionSection {
    #[serde(default = "default_methods")]
    pub methods: Vec<AttributionMethod>,
    #[serde(flatten)]
    pub config: AttributionConfig,
}

impl Default for AttributionSection {
    fn default() -> Self {
        Self {
            methods: default_methods(),
            config: AttributionConfig::default(),
        }
    }
}

fn default_k_grid() -> Vec<f64> {
    (0..10).map(|k| k as f64 * 10.0).collect()
}

fn default_repeats() -> usize {
    10
}

fn default_ranking() -> RankingMode {
    RankingMode::Signed
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AblationSection {
    #[serde(default = "default_k_grid")]
    pub k_grid: Vec<f64>,
    #[serde(default = "default_ranking")]
    pub ranking: RankingMode,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
}

impl Default for AblationSection {
    fn default() -> Self {
        Self {
            k_grid: default_k_grid(),
            ranking: default_ranking(),
            repeats: default_repeats(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSource {
    pub rows: usize,
    pub features: usize,
    pub informative: Vec<usize>,
}

fn default_train_fraction() -> f64 {
    0.8
}

fn default_missing_token() -> String {
    "NA".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub name: String,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub schema: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSource>,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default = "default_missing_token")]
    pub missing_token: String,
    /// Features with more missing cells than this are dropped. Absent means
    /// keep everything (gaps are still imputed).
    #[serde(default)]
    pub missing_threshold: Option<usize>,
    /// Random row subsample taken before splitting.
    #[serde(default)]
    pub row_subsample: Option<usize>,
    /// Stratified evaluation subset of the test split.
    #[serde(default)]
    pub eval_sample: Option<usize>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("tabattr-out")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub attribution: AttributionSection,
    #[serde(default)]
    pub ablation: AblationSection,
    pub datasets: Vec<DatasetConfig>,
    pub baselines: Vec<BaselineSpec>,
}

/// Outcome of structural validation: hard errors and advisory warnings.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl ExperimentConfig {
    /// Parse a config file; relative dataset paths are resolved against the
    /// config file's directory.
    pub fn load(path: impl AsRef<Path>) -> anyhow::Result<ExperimentConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config '{}'", path.display()))?;
        let mut config: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("cannot parse '{}'", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for dataset in &mut config.datasets {
            if let Some(csv) = &dataset.csv {
                if csv.is_relative() {
                    dataset.csv = Some(base.join(csv));
                }
            }
            if let Some(schema) = &dataset.schema {
                if schema.is_relative() {
                    dataset.schema = Some(base.join(schema));
                }
            }
        }
        Ok(config)
    }

    /// Structural and referential checks, plus warnings for caveated
    /// combinations (noise baselines over categorical features).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let err = |report: &mut ValidationReport, msg: String| report.errors.push(msg);

        if self.datasets.is_empty() {
            err(&mut report, "no datasets configured".into());
        }
        if self.baselines.is_empty() {
            err(&mut report, "no baselines configured".into());
        }
        if self.attribution.methods.is_empty() {
            err(&mut report, "no attribution methods configured".into());
        }

        let mut names = std::collections::BTreeSet::new();
        let mut any_categorical = false;
        for dataset in &self.datasets {
            let name = &dataset.name;
            if !names.insert(name.clone()) {
                err(&mut report, format!("duplicate dataset name '{name}'"));
            }
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                err(
                    &mut report,
                    format!("dataset name '{name}' must be non-empty [a-zA-Z0-9_-]"),
                );
            }
            match (&dataset.csv, &dataset.schema, &dataset.synthetic) {
                (Some(csv), Some(schema), None) => {
                    if !csv.exists() {
                        err(
                            &mut report,
                            format!("dataset '{name}': csv '{}' does not exist", csv.display()),
                        );
                    }
                    if !schema.exists() {
                        err(
                            &mut report,
                            format!(
                                "dataset '{name}': schema '{}' does not exist",
                                schema.display()
                            ),
                        );
                    } else {
                        match FeatureSchema::from_path(schema) {
                            Ok(parsed) => {
                                let has_categorical = parsed
                                    .features
                                    .iter()
                                    .any(|f| f.kind == FeatureKind::Categorical);
                                any_categorical |= has_categorical;
                            }
                            Err(e) => err(
                                &mut report,
                                format!("dataset '{name}': schema does not parse: {e}"),
                            ),
                        }
                    }
                }
                (None, None, Some(synth)) => {
                    if synth.rows < 10 {
                        err(&mut report, format!("dataset '{name}': needs >= 10 rows"));
                    }
                    if synth.informative.is_empty()
                        || synth.informative.iter().any(|&j| j >= synth.features)
                    {
                        err(
                            &mut report,
                            format!("dataset '{name}': invalid informative feature set"),
                        );
                    }
                }
                _ => err(
                    &mut report,
                    format!("dataset '{name}': configure either csv+schema or synthetic"),
                ),
            }
            if !dataset.train_fraction.is_finite()
                || dataset.train_fraction <= 0.0
                || dataset.train_fraction >= 1.0
            {
                err(
                    &mut report,
                    format!("dataset '{name}': train_fraction must be in (0, 1)"),
                );
            }
            if dataset.row_subsample == Some(0) || dataset.eval_sample == Some(0) {
                err(
                    &mut report,
                    format!("dataset '{name}': subsample sizes must be positive"),
                );
            }
        }

        let mut baseline_names = std::collections::BTreeSet::new();
        for spec in &self.baselines {
            if let Err(e) = spec.validate() {
                err(&mut report, format!("baseline '{}': {e}", spec.name()));
            }
            if !baseline_names.insert(spec.name()) {
                err(
                    &mut report,
                    format!("baseline '{}' configured twice", spec.name()),
                );
            }
        }

        let mut method_names = std::collections::BTreeSet::new();
        for method in &self.attribution.methods {
            if !method_names.insert(method.name()) {
                err(
                    &mut report,
                    format!("attribution method '{}' listed twice", method.name()),
                );
            }
        }
        if let Err(e) = self.attribution.config.validate() {
            err(&mut report, format!("attribution config: {e}"));
        }

        let grid = &self.ablation.k_grid;
        if grid.is_empty() || grid[0] != 0.0 {
            err(&mut report, "k_grid must start at 0".into());
        }
        if grid.windows(2).any(|w| w[0].is_nan() || w[1].is_nan() || w[0] >= w[1]) {
            err(&mut report, "k_grid must be strictly increasing".into());
        }
        if grid.last().is_some_and(|&k| k > 100.0) {
            err(&mut report, "k_grid may not exceed 100".into());
        }
        if self.ablation.repeats == 0 {
            err(&mut report, "ablation repeats must be >= 1".into());
        }

        if any_categorical {
            let noisy: Vec<&str> = self
                .baselines
                .iter()
                .filter(|s| {
                    matches!(
                        s,
                        BaselineSpec::Gaussian { .. }
                            | BaselineSpec::Uniform { .. }
                            | BaselineSpec::Blurred { .. }
                    )
                })
                .map(|s| s.name())
                .collect();
            if !noisy.is_empty() {
                report.warnings.push(format!(
                    "baselines [{}] assume continuous features but a schema declares categorical ones; \
                     categorical codes will be treated as numeric",
                    noisy.join(", ")
                ));
            }
        }
        report
    }
}

/// Load a config file and fail on validation errors (warnings pass).
pub fn load_validated(path: impl AsRef<Path>) -> anyhow::Result<(ExperimentConfig, ValidationReport)> {
    let config = ExperimentConfig::load(path)?;
    let report = config.validate();
    if !report.is_ok() {
        bail!("config is invalid:\n  {}", report.errors.join("\n  "));
    }
    Ok((config, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const MINIMAL: &str = r#"
master_seed = 7

[[datasets]]
name = "synth"
synthetic = { rows = 100, features = 4, informative = [0] }

[[baselines]]
method = "constant"
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(MINIMAL.as_bytes()).unwrap();
        let config = ExperimentConfig::load(file.path()).unwrap();
        assert_eq!(config.master_seed, 7);
        assert_eq!(config.model.hidden_units, 32);
        assert_eq!(config.attribution.methods.len(), 4);
        assert_eq!(config.ablation.k_grid.len(), 10);
        assert!(config.validate().is_ok());
    }

    #[test]
    fn missing_csv_is_a_validation_error() {
        let config_text = r#"
master_seed = 1

[[datasets]]
name = "real"
csv = "does-not-exist.csv"
schema = "does-not-exist.toml"

[[baselines]]
method = "constant"
"#;
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(config_text.as_bytes()).unwrap();
        let config = ExperimentConfig::load(file.path()).unwrap();
        let report = config.validate();
        assert!(!report.is_ok());
        assert!(report.errors.iter().any(|e| e.contains("does not exist")));
    }

    #[test]
    fn bad_k_grid_is_rejected() {
        let text = r#"
master_seed = 7

[ablation]
k_grid = [10.0, 20.0]

[[datasets]]
name = "synth"
synthetic = { rows = 100, features = 4, informative = [0] }

[[baselines]]
method = "constant"
"#;
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        let config = ExperimentConfig::load(file.path()).unwrap();
        let report = config.validate();
        assert!(report.errors.iter().any(|e| e.contains("start at 0")));
    }

    #[test]
    fn categorical_schema_with_noise_baseline_warns() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("d.csv"),
            "color,y\nred,0\nblue,1\n",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("d.schema.toml"),
            "label = \"y\"\n\n[[feature]]\nname = \"color\"\nkind = \"categorical\"\n",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("config.toml"),
            r#"
master_seed = 1

[[datasets]]
name = "d"
csv = "d.csv"
schema = "d.schema.toml"

[[baselines]]
method = "gaussian"
"#,
        )
        .unwrap();
        let config = ExperimentConfig::load(dir.path().join("config.toml")).unwrap();
        let report = config.validate();
        assert!(report.is_ok(), "{:?}", report.errors);
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].contains("gaussian"));
    }
}
