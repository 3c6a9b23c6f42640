//! Executes the experiment matrix: per dataset, preprocess and train, then
//! compute attributions and ablation curves for every (attribution method x
//! baseline) cell plus one random-ranking control, and write all artifacts
//! with a checksummed manifest.
//!
//! Every random stream is split from the master seed by stage label
//! (`dataset:<name>`, `attr:<dataset>:<method>:<baseline>`, ...), so adding
//! or removing a cell never changes the results of the others, and thread
//! scheduling cannot either.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use rayon::prelude::*;

use tabattr_core::ablation::{
    ablation_curve, area_under_curve, random_control_curve, AblationCurve, CurveMeta,
};
use tabattr_core::attribution::{attribute, AttributionMethod, AttributionVector};
use tabattr_core::baselines::BaselineSpec;
use tabattr_core::data::{
    split_train_test, stratified_sample, synth_dataset, Dataset, FeatureSchema, RawTable,
};
use tabattr_core::model::{train, MLPModel, TrainConfig};
use tabattr_core::numerics::Rng;

use crate::config::{DatasetConfig, ExperimentConfig};
use crate::manifest::{
    sha256_file, ArtifactRecord, CellRecord, CellStatus, DatasetRecord, FeatureDropRecord,
    RunManifest, MANIFEST_FILE,
};

/// KernelSHAP cells fall back to a stratified evaluation subsample on wide
/// datasets, mirroring how exhaustive coalition costs are usually tamed.
const KSHAP_WIDE_FEATURES: usize = 60;
const KSHAP_SUBSAMPLE: usize = 400;

pub struct RunSummary {
    pub out_dir: PathBuf,
    pub cells_total: usize,
    pub cells_failed: usize,
    pub report_lines: Vec<String>,
}

struct PreparedDataset {
    name: String,
    dataset: Dataset,
    model: MLPModel,
    eval_rows: Vec<usize>,
    kshap_eval_rows: Vec<usize>,
    record: DatasetRecord,
}

pub fn run(
    config: &ExperimentConfig,
    out_dir: &Path,
    master_seed: u64,
) -> anyhow::Result<RunSummary> {
    if out_dir.exists() && std::fs::read_dir(out_dir)?.next().is_some() {
        bail!(
            "output directory '{}' exists and is not empty",
            out_dir.display()
        );
    }
    std::fs::create_dir_all(out_dir)?;

    let started = Instant::now();
    let master = Rng::new(master_seed);
    let mut stage_seeds = BTreeMap::new();
    let mut stage_seconds = BTreeMap::new();
    let mut datasets = Vec::new();
    let mut cells = Vec::new();
    let mut report = AucReport::default();
    let validation = config.validate();

    for dataset_config in &config.datasets {
        let name = dataset_config.name.clone();
        let stage_start = Instant::now();
        let prepared = prepare_dataset(
            config,
            dataset_config,
            &master,
            out_dir,
            &mut stage_seeds,
        );
        stage_seconds.insert(format!("{name}:prepare"), stage_start.elapsed().as_secs_f64());

        let prepared = match prepared {
            Ok(p) => p,
            Err(error) => {
                // the whole dataset is unusable; mark its matrix cells
                datasets.push(DatasetRecord {
                    name: name.clone(),
                    rows: 0,
                    features: 0,
                    classes: 0,
                    train_rows: 0,
                    test_rows: 0,
                    eval_rows: 0,
                    dropped_features: Vec::new(),
                    error: Some(format!("{error:#}")),
                });
                for method in &config.attribution.methods {
                    for spec in &config.baselines {
                        cells.push(CellRecord {
                            dataset: name.clone(),
                            attribution_method: method.name().into(),
                            baseline_method: spec.name().into(),
                            status: CellStatus::Skipped {
                                reason: "dataset preparation failed".into(),
                            },
                            artifacts: Vec::new(),
                            seconds: 0.0,
                        });
                    }
                }
                continue;
            }
        };

        // one shared noise stream per dataset: curves of different cells see
        // common random numbers, so their differences come from rankings
        let ablate_rng = master.split(&format!("ablate:{name}"));
        stage_seeds.insert(format!("ablate:{name}"), ablate_rng.seed());

        let control_start = Instant::now();
        let control = random_control_curve(
            &prepared.model,
            &prepared.dataset,
            &prepared.eval_rows,
            &config.ablation.k_grid,
            config.ablation.repeats,
            &ablate_rng,
            CurveMeta {
                dataset: name.clone(),
                attribution_method: "random_control".into(),
                baseline_method: "random_control".into(),
                seed: master_seed,
            },
        )
        .with_context(|| format!("random control for '{name}'"))?;
        let control_path = out_dir.join(format!("curve_{name}_random_control.csv"));
        write_curve_csv(&control_path, &control)?;
        stage_seconds.insert(format!("{name}:control"), control_start.elapsed().as_secs_f64());
        report.record_control(&control);

        for method in &config.attribution.methods {
            for spec in &config.baselines {
                let cell_start = Instant::now();
                let cell = run_cell(
                    config,
                    &prepared,
                    *method,
                    spec,
                    &master,
                    &ablate_rng,
                    out_dir,
                    &mut stage_seeds,
                    master_seed,
                );
                let seconds = cell_start.elapsed().as_secs_f64();
                let record = match cell {
                    Ok((artifacts, curve)) => {
                        report.record_cell(&curve);
                        CellRecord {
                            dataset: name.clone(),
                            attribution_method: method.name().into(),
                            baseline_method: spec.name().into(),
                            status: CellStatus::Ok,
                            artifacts,
                            seconds,
                        }
                    }
                    Err(error) => CellRecord {
                        dataset: name.clone(),
                        attribution_method: method.name().into(),
                        baseline_method: spec.name().into(),
                        status: CellStatus::Error {
                            message: format!("{error:#}"),
                        },
                        artifacts: Vec::new(),
                        seconds,
                    },
                };
                println!(
                    "cell {name}/{}/{}: {}",
                    method.name(),
                    spec.name(),
                    match &record.status {
                        CellStatus::Ok => format!("ok ({seconds:.2}s)"),
                        CellStatus::Error { message } => format!("error: {message}"),
                        CellStatus::Skipped { reason } => format!("skipped: {reason}"),
                    }
                );
                cells.push(record);
            }
        }
        datasets.push(prepared.record);
    }

    stage_seconds.insert("total".into(), started.elapsed().as_secs_f64());

    // checksum every file in the run directory (flat layout)
    let mut artifacts = Vec::new();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(out_dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    entries.sort();
    for path in entries {
        let file_name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default()
            .to_string();
        if file_name == MANIFEST_FILE || !path.is_file() {
            continue;
        }
        let (sha256, bytes) = sha256_file(&path)?;
        artifacts.push(ArtifactRecord {
            path: file_name,
            sha256,
            bytes,
        });
    }

    let cells_total = cells.len();
    let cells_failed = cells
        .iter()
        .filter(|c| c.status != CellStatus::Ok)
        .count();

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed,
        config: serde_json::to_value(config)?,
        stage_seeds,
        stage_seconds,
        datasets,
        cells,
        artifacts,
        warnings: validation.warnings,
    };
    manifest.write(out_dir)?;

    Ok(RunSummary {
        out_dir: out_dir.to_path_buf(),
        cells_total,
        cells_failed,
        report_lines: report.lines(),
    })
}

fn prepare_dataset(
    config: &ExperimentConfig,
    dataset_config: &DatasetConfig,
    master: &Rng,
    out_dir: &Path,
    stage_seeds: &mut BTreeMap<String, u64>,
) -> anyhow::Result<PreparedDataset> {
    let name = &dataset_config.name;
    let ds_rng = master.split(&format!("dataset:{name}"));
    stage_seeds.insert(format!("dataset:{name}"), ds_rng.seed());

    let mut dropped_features = Vec::new();
    let dataset = if let Some(synth) = &dataset_config.synthetic {
        let mut rng = ds_rng.split("synth");
        synth_dataset(synth.rows, synth.features, &synth.informative, &mut rng)
            .context("synthetic generation")?
    } else {
        let csv = dataset_config.csv.as_ref().context("csv path missing")?;
        let schema_path = dataset_config.schema.as_ref().context("schema path missing")?;
        let schema = FeatureSchema::from_path(schema_path)
            .with_context(|| format!("schema '{}'", schema_path.display()))?;
        let mut table = RawTable::load_csv(csv, &schema, &dataset_config.missing_token)
            .with_context(|| format!("csv '{}'", csv.display()))?;
        if let Some(k) = dataset_config.row_subsample {
            if k < table.n_rows() {
                let mut rng = ds_rng.split("row-subsample");
                let mut rows = rng.sample_without_replacement(table.n_rows(), k)?;
                rows.sort_unstable();
                table = table.select_rows(&rows)?;
            }
        }
        if let Some(threshold) = dataset_config.missing_threshold {
            let (kept, missing_report) = table.drop_high_missing(threshold)?;
            table = kept;
            dropped_features = missing_report
                .features
                .iter()
                .map(|f| FeatureDropRecord {
                    name: f.name.clone(),
                    missing: f.missing,
                    total: f.total,
                    dropped: f.dropped,
                })
                .collect();
        }
        let mut rng = ds_rng.split("split");
        split_train_test(&table, dataset_config.train_fraction, &mut rng)
            .context("train/test split")?
    };

    let train_seed = ds_rng.split("train").seed();
    stage_seeds.insert(format!("train:{name}"), train_seed);
    let train_config = TrainConfig {
        hidden_units: config.model.hidden_units,
        learning_rate: config.model.learning_rate,
        epochs: config.model.epochs,
        batch_size: config.model.batch_size,
        seed: train_seed,
    };
    let model = train(&dataset, &train_config).context("training")?;
    let model_path = out_dir.join(format!("model_{name}.txt"));
    model
        .save(&model_path)
        .with_context(|| format!("saving '{}'", model_path.display()))?;

    let eval_rows = match dataset_config.eval_sample {
        Some(n) => {
            let mut rng = ds_rng.split("eval-sample");
            stratified_sample(&dataset, n, &mut rng).context("eval subsample")?
        }
        None => dataset.test_indices().to_vec(),
    };
    let kshap_eval_rows = if dataset.n_features() > KSHAP_WIDE_FEATURES
        && eval_rows.len() > KSHAP_SUBSAMPLE
    {
        let mut rng = ds_rng.split("kshap-eval-sample");
        stratified_sample(&dataset, KSHAP_SUBSAMPLE, &mut rng)
            .context("kernel_shap eval subsample")?
    } else {
        eval_rows.clone()
    };

    let record = DatasetRecord {
        name: name.clone(),
        rows: dataset.n_rows(),
        features: dataset.n_features(),
        classes: dataset.n_classes(),
        train_rows: dataset.train_indices().len(),
        test_rows: dataset.test_indices().len(),
        eval_rows: eval_rows.len(),
        dropped_features,
        error: None,
    };
    Ok(PreparedDataset {
        name: name.clone(),
        dataset,
        model,
        eval_rows,
        kshap_eval_rows,
        record,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    config: &ExperimentConfig,
    prepared: &PreparedDataset,
    method: AttributionMethod,
    spec: &BaselineSpec,
    master: &Rng,
    ablate_rng: &Rng,
    out_dir: &Path,
    stage_seeds: &mut BTreeMap<String, u64>,
    master_seed: u64,
) -> anyhow::Result<(Vec<String>, AblationCurve)> {
    let name = &prepared.name;
    let rows: &[usize] = if method == AttributionMethod::KernelShap {
        &prepared.kshap_eval_rows
    } else {
        &prepared.eval_rows
    };
    let cell_label = format!("attr:{name}:{}:{}", method.name(), spec.name());
    let cell_rng = master.split(&cell_label);
    stage_seeds.insert(cell_label, cell_rng.seed());

    let attributions: Vec<AttributionVector> = rows
        .par_iter()
        .map(|&row| {
            let mut rng = cell_rng.split(&format!("row{row}"));
            attribute(
                method,
                &prepared.model,
                prepared.dataset.row(row),
                spec,
                &prepared.dataset,
                &config.attribution.config,
                &mut rng,
            )
        })
        .collect::<tabattr_core::Result<_>>()
        .with_context(|| format!("attributions for {} rows", rows.len()))?;

    let values: Vec<Vec<f64>> = attributions.iter().map(|a| a.values.clone()).collect();
    let curve = ablation_curve(
        &prepared.model,
        &prepared.dataset,
        rows,
        &values,
        config.ablation.ranking,
        &config.ablation.k_grid,
        config.ablation.repeats,
        ablate_rng,
        CurveMeta {
            dataset: name.clone(),
            attribution_method: method.name().into(),
            baseline_method: spec.name().into(),
            seed: master_seed,
        },
    )
    .context("ablation curve")?;

    let dump_name = format!("attributions_{name}_{}_{}.csv", method.name(), spec.name());
    let curve_name = format!("curve_{name}_{}_{}.csv", method.name(), spec.name());
    write_attribution_csv(&out_dir.join(&dump_name), rows, &attributions)?;
    write_curve_csv(&out_dir.join(&curve_name), &curve)?;
    Ok((vec![dump_name, curve_name], curve))
}

fn write_attribution_csv(
    path: &Path,
    rows: &[usize],
    attributions: &[AttributionVector],
) -> anyhow::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let m = attributions.first().map_or(0, |a| a.values.len());
    let header: Vec<String> = (0..m).map(|j| format!("feature_{j}")).collect();
    writeln!(out, "row_id,target_class,{}", header.join(","))?;
    for (row, attribution) in rows.iter().zip(attributions) {
        let cells: Vec<String> = attribution.values.iter().map(|v| format!("{v}")).collect();
        writeln!(out, "{row},{},{}", attribution.target_class, cells.join(","))?;
    }
    Ok(())
}

pub(crate) fn write_curve_csv(path: &Path, curve: &AblationCurve) -> anyhow::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "dataset,attribution_method,baseline_method,k_percent,f1_mean,f1_std,seed"
    )?;
    for (i, k) in curve.k_grid.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{k},{},{},{}",
            curve.meta.dataset,
            curve.meta.attribution_method,
            curve.meta.baseline_method,
            curve.f1_mean[i],
            curve.f1_std[i],
            curve.meta.seed
        )?;
    }
    Ok(())
}

/// Collects per-baseline area-under-curve summaries for the printed report.
#[derive(Default)]
struct AucReport {
    /// baseline -> (sum of AUC, count)
    per_baseline: BTreeMap<String, (f64, usize)>,
    control: (f64, usize),
}

impl AucReport {
    fn record_cell(&mut self, curve: &AblationCurve) {
        let auc = area_under_curve(&curve.k_grid, &curve.f1_mean);
        let entry = self
            .per_baseline
            .entry(curve.meta.baseline_method.clone())
            .or_insert((0.0, 0));
        entry.0 += auc;
        entry.1 += 1;
    }

    fn record_control(&mut self, curve: &AblationCurve) {
        self.control.0 += area_under_curve(&curve.k_grid, &curve.f1_mean);
        self.control.1 += 1;
    }

    fn lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        if self.control.1 == 0 {
            return lines;
        }
        let control = self.control.0 / self.control.1 as f64;
        lines.push("area under ablation curve, averaged over datasets and methods".into());
        lines.push("(lower = masking by that baseline's attributions destroys F1 faster)".into());
        let mut ranked: Vec<(&String, f64)> = self
            .per_baseline
            .iter()
            .map(|(name, (sum, count))| (name, sum / *count as f64))
            .collect();
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (name, auc) in &ranked {
            let marker = if *auc >= control {
                "  <- does not beat the random control"
            } else {
                ""
            };
            lines.push(format!("  {name:<14} auc {auc:.4}{marker}"));
        }
        lines.push(format!("  {:<14} auc {control:.4}", "random_control"));
        for flagged in ["uniform", "max_distance"] {
            if let Some((_, auc)) = ranked.iter().find(|(n, _)| n.as_str() == flagged) {
                if *auc >= control - 0.01 {
                    lines.push(format!(
                        "  note: {flagged} struggles to outperform the random control \
                         ({auc:.4} vs {control:.4})"
                    ));
                }
            }
        }
        lines
    }
}
