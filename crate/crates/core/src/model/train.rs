//! Mini-batch gradient-descent training on cross-entropy.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::{MLPModel, OutputKind};
use crate::numerics::{Matrix, Rng};

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_units: 32,
            learning_rate: 0.05,
            epochs: 50,
            batch_size: 32,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_units == 0 || self.batch_size == 0 {
            return Err(Error::Parameter(
                "hidden_units and batch_size must be positive".into(),
            ));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::Parameter(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

fn init_model(n_features: usize, n_classes: usize, config: &TrainConfig) -> Result<MLPModel> {
    let hidden = config.hidden_units;
    let (output, n_outputs) = if n_classes == 2 {
        (OutputKind::SigmoidBinary, 1)
    } else {
        (OutputKind::SoftmaxMulticlass, n_classes)
    };
    let mut rng = Rng::new(config.seed);
    // scaled-normal init: He for the ReLU layer, Xavier-ish for the head
    let w1_sd = (2.0 / n_features as f64).sqrt();
    let w2_sd = (1.0 / hidden as f64).sqrt();
    let mut w1 = Matrix::zeros(n_features, hidden);
    for i in 0..n_features {
        for h in 0..hidden {
            w1.set(i, h, rng.normal(0.0, w1_sd)?);
        }
    }
    let mut w2 = Matrix::zeros(hidden, n_outputs);
    for h in 0..hidden {
        for o in 0..n_outputs {
            w2.set(h, o, rng.normal(0.0, w2_sd)?);
        }
    }
    MLPModel::new(w1, vec![0.0; hidden], w2, vec![0.0; n_outputs], output, n_classes)
}

/// Mean cross-entropy of the model over the given rows.
pub fn mean_cross_entropy(model: &MLPModel, dataset: &Dataset, rows: &[usize]) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::Parameter("no rows to evaluate".into()));
    }
    let batch = gather(dataset.features(), rows);
    let logits = model.logits_batch(&batch)?;
    let mut total = 0.0;
    for (i, &row) in rows.iter().enumerate() {
        let y = dataset.labels()[row];
        total += match model.output_kind() {
            OutputKind::SigmoidBinary => {
                let l = logits.get(i, 0);
                // numerically stable binary cross-entropy from the logit
                l.max(0.0) - l * y as f64 + (-l.abs()).exp().ln_1p()
            }
            OutputKind::SoftmaxMulticlass => {
                let row_logits = logits.row(i);
                let max = row_logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let log_sum: f64 = row_logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln() + max;
                log_sum - row_logits[y]
            }
        };
    }
    Ok(total / rows.len() as f64)
}

fn gather(features: &Matrix, rows: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(rows.len(), features.cols());
    for (i, &row) in rows.iter().enumerate() {
        out.row_mut(i).copy_from_slice(features.row(row));
    }
    out
}

/// Train a fresh model on the dataset's training split.
///
/// Plain mini-batch gradient descent (no momentum), seeded scaled-normal
/// initialisation, cross-entropy loss. `epochs == 0` returns the initialised
/// model untouched. Fully deterministic given the config seed.
pub fn train(dataset: &Dataset, config: &TrainConfig) -> Result<MLPModel> {
    config.validate()?;
    let train_rows = dataset.train_indices();
    if train_rows.is_empty() {
        return Err(Error::Parameter("training split is empty".into()));
    }
    let mut model = init_model(dataset.n_features(), dataset.n_classes(), config)?;
    let mut rng = Rng::new(config.seed).split("epoch-shuffle");

    for epoch in 0..config.epochs {
        let order = rng.permutation(train_rows.len());
        for chunk in order.chunks(config.batch_size) {
            let rows: Vec<usize> = chunk.iter().map(|&i| train_rows[i]).collect();
            step(&mut model, dataset, &rows, config.learning_rate)?;
        }
        let loss = mean_cross_entropy(&model, dataset, train_rows)?;
        if !loss.is_finite() {
            return Err(Error::Training {
                epoch,
                message: format!("loss became {loss}"),
            });
        }
    }
    Ok(model)
}

fn step(model: &mut MLPModel, dataset: &Dataset, rows: &[usize], lr: f64) -> Result<()> {
    let n = rows.len();
    let batch = gather(dataset.features(), rows);

    // forward, keeping hidden activations
    let mut z1 = batch.matmul(&model.w1)?;
    for i in 0..n {
        let row = z1.row_mut(i);
        for (v, b) in row.iter_mut().zip(&model.b1) {
            *v += b;
        }
    }
    let mut hidden = z1.clone();
    for i in 0..n {
        for v in hidden.row_mut(i) {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
    }
    let mut dlogits = hidden.matmul(&model.w2)?;
    for i in 0..n {
        let row = dlogits.row_mut(i);
        for (v, b) in row.iter_mut().zip(&model.b2) {
            *v += b;
        }
    }

    // gradient of the mean loss w.r.t. the output units, in place
    let inv_n = 1.0 / n as f64;
    match model.output_kind() {
        OutputKind::SigmoidBinary => {
            for (i, &row) in rows.iter().enumerate() {
                let l = dlogits.get(i, 0);
                let p = 1.0 / (1.0 + (-l).exp());
                dlogits.set(i, 0, (p - dataset.labels()[row] as f64) * inv_n);
            }
        }
        OutputKind::SoftmaxMulticlass => {
            for (i, &row) in rows.iter().enumerate() {
                let out = dlogits.row_mut(i);
                let max = out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut sum = 0.0;
                for v in out.iter_mut() {
                    *v = (*v - max).exp();
                    sum += *v;
                }
                for v in out.iter_mut() {
                    *v /= sum;
                }
                out[dataset.labels()[row]] -= 1.0;
                for v in out.iter_mut() {
                    *v *= inv_n;
                }
            }
        }
    }

    let dw2 = hidden.transpose().matmul(&dlogits)?;
    let mut db2 = vec![0.0; model.n_outputs()];
    for i in 0..n {
        for (acc, v) in db2.iter_mut().zip(dlogits.row(i)) {
            *acc += v;
        }
    }

    let mut dhidden = dlogits.matmul(&model.w2.transpose())?;
    for i in 0..n {
        let z_row = z1.row(i);
        for (h, v) in dhidden.row_mut(i).iter_mut().enumerate() {
            if z_row[h] <= 0.0 {
                *v = 0.0;
            }
        }
    }
    let dw1 = batch.transpose().matmul(&dhidden)?;
    let mut db1 = vec![0.0; model.n_hidden()];
    for i in 0..n {
        for (acc, v) in db1.iter_mut().zip(dhidden.row(i)) {
            *acc += v;
        }
    }

    for i in 0..model.w1.rows() {
        for h in 0..model.w1.cols() {
            let v = model.w1.get(i, h) - lr * dw1.get(i, h);
            model.w1.set(i, h, v);
        }
    }
    for (b, g) in model.b1.iter_mut().zip(&db1) {
        *b -= lr * g;
    }
    for h in 0..model.w2.rows() {
        for o in 0..model.w2.cols() {
            let v = model.w2.get(h, o) - lr * dw2.get(h, o);
            model.w2.set(h, o, v);
        }
    }
    for (b, g) in model.b2.iter_mut().zip(&db2) {
        *b -= lr * g;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synth_dataset;

    /// fraction of rows classified correctly
    fn accuracy(model: &MLPModel, dataset: &Dataset, rows: &[usize]) -> Result<f64> {
        let batch = gather(dataset.features(), rows);
        let predicted = model.predict_class(&batch)?;
        let correct = predicted
            .iter()
            .zip(rows.iter().map(|&r| dataset.labels()[r]))
            .filter(|(p, y)| **p == *y)
            .count();
        Ok(correct as f64 / rows.len() as f64)
    }

    #[test]
    fn zero_epochs_returns_initialised_model() {
        let mut rng = Rng::new(6);
        let ds = synth_dataset(100, 4, &[0], &mut rng).unwrap();
        let config = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        let a = train(&ds, &config).unwrap();
        let b = init_model(4, 2, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn training_is_deterministic() {
        let mut rng = Rng::new(6);
        let ds = synth_dataset(200, 4, &[0, 1], &mut rng).unwrap();
        let config = TrainConfig {
            epochs: 5,
            ..TrainConfig::default()
        };
        let a = train(&ds, &config).unwrap();
        let b = train(&ds, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loss_decreases_over_training() {
        let mut rng = Rng::new(9);
        let ds = synth_dataset(400, 4, &[0, 1], &mut rng).unwrap();
        let untrained = train(
            &ds,
            &TrainConfig {
                epochs: 1,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        let trained = train(&ds, &TrainConfig::default()).unwrap();
        let first = mean_cross_entropy(&untrained, &ds, ds.train_indices()).unwrap();
        let last = mean_cross_entropy(&trained, &ds, ds.train_indices()).unwrap();
        assert!(last <= first, "loss went up: {first} -> {last}");
    }

    #[test]
    fn separable_data_is_learned() {
        // two features, label decided by their sum: linearly separable
        let mut rng = Rng::new(5);
        let ds = synth_dataset(600, 2, &[0, 1], &mut rng).unwrap();
        let config = TrainConfig {
            hidden_units: 8,
            ..TrainConfig::default()
        };
        let model = train(&ds, &config).unwrap();
        let acc = accuracy(&model, &ds, ds.test_indices()).unwrap();
        assert!(acc >= 0.95, "test accuracy only {acc}");

        let batch = gather(ds.features(), ds.test_indices());
        let predicted = model.predict_class(&batch).unwrap();
        let labels: Vec<usize> = ds.test_indices().iter().map(|&r| ds.labels()[r]).collect();
        let f1 = crate::ablation::f1_score(
            &predicted,
            &labels,
            crate::ablation::F1Scheme::BinaryPositive,
        )
        .unwrap();
        assert!(f1 >= 0.95, "test F1 only {f1}");
    }

    #[test]
    fn multiclass_training_runs() {
        // tiny 3-class problem from thresholding one feature
        use crate::data::{Dataset, FeatureSchema};
        let mut rng = Rng::new(3);
        let n = 300;
        let mut raw = Matrix::zeros(n, 2);
        let mut labels = Vec::new();
        for i in 0..n {
            let a = rng.normal(0.0, 1.0).unwrap();
            let b = rng.normal(0.0, 1.0).unwrap();
            raw.set(i, 0, a);
            raw.set(i, 1, b);
            labels.push(if a < -0.5 {
                0
            } else if a < 0.5 {
                1
            } else {
                2
            });
        }
        let schema = FeatureSchema::all_continuous("y", &["a".into(), "b".into()]).unwrap();
        let ds = Dataset::from_numeric(
            raw,
            labels,
            vec!["0".into(), "1".into(), "2".into()],
            schema,
            0.8,
            &mut rng,
        )
        .unwrap();
        let model = train(
            &ds,
            &TrainConfig {
                epochs: 80,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert_eq!(model.n_outputs(), 3);
        let acc = accuracy(&model, &ds, ds.test_indices()).unwrap();
        assert!(acc > 0.7, "multiclass accuracy only {acc}");
    }
}
