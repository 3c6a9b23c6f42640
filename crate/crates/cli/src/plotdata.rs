//! Figure-ready CSV bundles from a completed run: one long-format file per
//! dataset (every curve group side by side) and one cross-dataset aggregate
//! with mean/std columns.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use crate::manifest::{CellStatus, RunManifest};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub dataset: String,
    pub attribution_method: String,
    pub baseline_method: String,
    pub k_percent: f64,
    pub f1_mean: f64,
    pub f1_std: f64,
    pub seed: u64,
}

pub struct PlotBundle {
    pub per_dataset: Vec<PathBuf>,
    pub aggregate: PathBuf,
}

pub fn read_curve_csv(path: &Path) -> anyhow::Result<Vec<CurveRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .with_context(|| format!("missing curve artifact '{}'", path.display()))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != 7 {
            bail!("malformed curve row in '{}'", path.display());
        }
        rows.push(CurveRow {
            dataset: record[0].to_string(),
            attribution_method: record[1].to_string(),
            baseline_method: record[2].to_string(),
            k_percent: record[3].parse()?,
            f1_mean: record[4].parse()?,
            f1_std: record[5].parse()?,
            seed: record[6].parse()?,
        });
    }
    Ok(rows)
}

fn write_rows(path: &Path, rows: &[CurveRow]) -> anyhow::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "dataset,attribution_method,baseline_method,k_percent,f1_mean,f1_std,seed"
    )?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.dataset,
            row.attribution_method,
            row.baseline_method,
            row.k_percent,
            row.f1_mean,
            row.f1_std,
            row.seed
        )?;
    }
    Ok(())
}

/// Build the per-dataset and aggregate CSV bundles for a completed run.
///
/// Per-dataset files hold every successful (method x baseline) curve plus
/// the random control. The aggregate averages each (method, baseline, K)
/// point over all datasets that completed the cell (population std), and
/// deliberately excludes the control.
pub fn emit(run_dir: &Path) -> anyhow::Result<PlotBundle> {
    let manifest = RunManifest::load(run_dir)?;
    let mut per_dataset_paths = Vec::new();

    // (method, baseline) -> k -> f1 means across datasets
    let mut aggregate: BTreeMap<(String, String), BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    let mut k_values: BTreeMap<u64, f64> = BTreeMap::new();

    for dataset in &manifest.datasets {
        if dataset.error.is_some() {
            continue;
        }
        let mut rows: Vec<CurveRow> = Vec::new();
        for cell in manifest
            .cells
            .iter()
            .filter(|c| c.dataset == dataset.name && c.status == CellStatus::Ok)
        {
            let path = run_dir.join(format!(
                "curve_{}_{}_{}.csv",
                cell.dataset, cell.attribution_method, cell.baseline_method
            ));
            let curve = read_curve_csv(&path)?;
            for row in &curve {
                let key = (
                    row.attribution_method.clone(),
                    row.baseline_method.clone(),
                );
                let k_bits = row.k_percent.to_bits();
                k_values.insert(k_bits, row.k_percent);
                aggregate
                    .entry(key)
                    .or_default()
                    .entry(k_bits)
                    .or_default()
                    .push(row.f1_mean);
            }
            rows.extend(curve);
        }
        let control_path = run_dir.join(format!("curve_{}_random_control.csv", dataset.name));
        rows.extend(read_curve_csv(&control_path)?);

        rows.sort_by(|a, b| {
            (&a.attribution_method, &a.baseline_method)
                .cmp(&(&b.attribution_method, &b.baseline_method))
                .then(a.k_percent.total_cmp(&b.k_percent))
        });
        let path = run_dir.join(format!("plot_{}.csv", dataset.name));
        write_rows(&path, &rows)?;
        per_dataset_paths.push(path);
    }

    if per_dataset_paths.is_empty() {
        bail!("run produced no completed datasets to plot");
    }

    let aggregate_path = run_dir.join("aggregate.csv");
    let mut out = std::io::BufWriter::new(std::fs::File::create(&aggregate_path)?);
    writeln!(
        out,
        "attribution_method,baseline_method,k_percent,f1_mean,f1_std,n_datasets"
    )?;
    for ((method, baseline), by_k) in &aggregate {
        let mut ks: Vec<&u64> = by_k.keys().collect();
        ks.sort_by(|a, b| k_values[a].total_cmp(&k_values[b]));
        for k_bits in ks {
            let values = &by_k[k_bits];
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let std =
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            writeln!(
                out,
                "{method},{baseline},{},{mean},{std},{}",
                k_values[k_bits],
                values.len()
            )?;
        }
    }
    drop(out);

    Ok(PlotBundle {
        per_dataset: per_dataset_paths,
        aggregate: aggregate_path,
    })
}
