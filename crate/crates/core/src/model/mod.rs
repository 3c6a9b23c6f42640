//! The predictor under explanation: a one-hidden-layer ReLU network with a
//! sigmoid (binary) or softmax (multiclass) output.

mod io;
mod train;

pub use train::{mean_cross_entropy, train, TrainConfig};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Output head of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    /// One output unit squeezed through a sigmoid; class 1 is "positive".
    SigmoidBinary,
    /// One output unit per class, normalised by softmax.
    SoftmaxMulticlass,
}

/// Behavioural contract every attribution method can rely on: batched class
/// probabilities, deterministic given the inputs.
pub trait Predictor {
    fn n_features(&self) -> usize;
    fn n_classes(&self) -> usize;
    /// Rows of the output sum to 1 (softmax) or hold a single probability of
    /// class 1 (sigmoid).
    fn predict_proba(&self, batch: &Matrix) -> Result<Matrix>;
}

/// Probability of `class` from one row of [`Predictor::predict_proba`] output.
pub fn class_probability(proba_row: &[f64], class: usize) -> f64 {
    if proba_row.len() == 1 {
        if class == 1 {
            proba_row[0]
        } else {
            1.0 - proba_row[0]
        }
    } else {
        proba_row[class]
    }
}

/// One-hidden-layer ReLU network. `w1` is `features x hidden`, `w2` is
/// `hidden x outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct MLPModel {
    pub(crate) w1: Matrix,
    pub(crate) b1: Vec<f64>,
    pub(crate) w2: Matrix,
    pub(crate) b2: Vec<f64>,
    pub(crate) output: OutputKind,
    pub(crate) n_classes: usize,
}

impl MLPModel {
    pub fn new(
        w1: Matrix,
        b1: Vec<f64>,
        w2: Matrix,
        b2: Vec<f64>,
        output: OutputKind,
        n_classes: usize,
    ) -> Result<Self> {
        let hidden = w1.cols();
        let outputs = w2.cols();
        if b1.len() != hidden || w2.rows() != hidden || b2.len() != outputs {
            return Err(Error::Shape(format!(
                "inconsistent layer shapes: w1 {}x{}, b1 {}, w2 {}x{}, b2 {}",
                w1.rows(),
                w1.cols(),
                b1.len(),
                w2.rows(),
                w2.cols(),
                b2.len()
            )));
        }
        match output {
            OutputKind::SigmoidBinary => {
                if outputs != 1 || n_classes != 2 {
                    return Err(Error::Shape(
                        "sigmoid output requires 1 output unit and 2 classes".into(),
                    ));
                }
            }
            OutputKind::SoftmaxMulticlass => {
                if outputs != n_classes || n_classes < 2 {
                    return Err(Error::Shape(format!(
                        "softmax output requires one unit per class, got {outputs} units for {n_classes} classes"
                    )));
                }
            }
        }
        if b1.iter().chain(&b2).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("model bias is not finite".into()));
        }
        Ok(Self {
            w1,
            b1,
            w2,
            b2,
            output,
            n_classes,
        })
    }

    pub fn n_features(&self) -> usize {
        self.w1.rows()
    }

    pub fn n_hidden(&self) -> usize {
        self.w1.cols()
    }

    pub fn n_outputs(&self) -> usize {
        self.w2.cols()
    }

    pub fn output_kind(&self) -> OutputKind {
        self.output
    }

    pub fn w1(&self) -> &Matrix {
        &self.w1
    }

    pub fn b1(&self) -> &[f64] {
        &self.b1
    }

    pub fn w2(&self) -> &Matrix {
        &self.w2
    }

    pub fn b2(&self) -> &[f64] {
        &self.b2
    }

    fn check_width(&self, len: usize) -> Result<()> {
        if len != self.n_features() {
            return Err(Error::Shape(format!(
                "input has {len} features, model expects {}",
                self.n_features()
            )));
        }
        Ok(())
    }

    /// Hidden pre-activations `W1^T x + b1`.
    pub fn hidden_preactivations(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_width(x.len())?;
        let mut z = self.b1.clone();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let row = self.w1.row(i);
            for (zh, w) in z.iter_mut().zip(row) {
                *zh += xi * w;
            }
        }
        Ok(z)
    }

    /// Pre-activation output units `W2^T relu(W1^T x + b1) + b2`.
    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        let z = self.hidden_preactivations(x)?;
        let mut out = self.b2.clone();
        for (h, &zh) in z.iter().enumerate() {
            if zh > 0.0 {
                let row = self.w2.row(h);
                for (o, w) in out.iter_mut().zip(row) {
                    *o += zh * w;
                }
            }
        }
        Ok(out)
    }

    /// The scalar attribution target for `class`: the class logit for
    /// softmax heads; for the sigmoid head the single logit, negated for
    /// class 0 (the log-odds of class 0 is minus the log-odds of class 1).
    pub fn class_logit(&self, x: &[f64], class: usize) -> Result<f64> {
        let logits = self.logits(x)?;
        self.signed_unit(class).map(|(unit, sign)| sign * logits[unit])
    }

    /// Map a class index to (output unit, sign) for attribution targets.
    pub(crate) fn signed_unit(&self, class: usize) -> Result<(usize, f64)> {
        if class >= self.n_classes {
            return Err(Error::Shape(format!(
                "class {class} out of range for {} classes",
                self.n_classes
            )));
        }
        match self.output {
            OutputKind::SigmoidBinary => Ok((0, if class == 1 { 1.0 } else { -1.0 })),
            OutputKind::SoftmaxMulticlass => Ok((class, 1.0)),
        }
    }

    /// Analytic gradient of output unit `unit` with respect to the input.
    /// The ReLU subgradient at exactly zero is taken as zero.
    pub fn input_gradient(&self, x: &[f64], unit: usize) -> Result<Vec<f64>> {
        self.check_width(x.len())?;
        if unit >= self.n_outputs() {
            return Err(Error::Shape(format!(
                "output unit {unit} out of range for {} units",
                self.n_outputs()
            )));
        }
        let z = self.hidden_preactivations(x)?;
        let mut grad = vec![0.0; self.n_features()];
        for (h, &zh) in z.iter().enumerate() {
            if zh > 0.0 {
                let w2 = self.w2.get(h, unit);
                if w2 == 0.0 {
                    continue;
                }
                for (i, g) in grad.iter_mut().enumerate() {
                    *g += self.w1.get(i, h) * w2;
                }
            }
        }
        Ok(grad)
    }

    /// Gradient of the signed class logit (see [`MLPModel::class_logit`]).
    pub fn class_gradient(&self, x: &[f64], class: usize) -> Result<Vec<f64>> {
        let (unit, sign) = self.signed_unit(class)?;
        let mut grad = self.input_gradient(x, unit)?;
        if sign < 0.0 {
            for g in &mut grad {
                *g = -*g;
            }
        }
        Ok(grad)
    }

    /// Batched logits, one row per input row.
    pub fn logits_batch(&self, batch: &Matrix) -> Result<Matrix> {
        if batch.cols() != self.n_features() {
            return Err(Error::Shape(format!(
                "batch width {} does not match {} features",
                batch.cols(),
                self.n_features()
            )));
        }
        let mut z = batch.matmul(&self.w1)?;
        for i in 0..z.rows() {
            let row = z.row_mut(i);
            for (v, b) in row.iter_mut().zip(&self.b1) {
                *v += b;
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        let mut out = z.matmul(&self.w2)?;
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (v, b) in row.iter_mut().zip(&self.b2) {
                *v += b;
            }
        }
        Ok(out)
    }

    pub fn predict_class(&self, batch: &Matrix) -> Result<Vec<usize>> {
        let proba = self.predict_proba(batch)?;
        Ok((0..proba.rows())
            .map(|i| {
                let row = proba.row(i);
                if row.len() == 1 {
                    usize::from(row[0] > 0.5)
                } else {
                    // argmax, ties broken toward the lower class index
                    let mut best = 0;
                    for (c, &p) in row.iter().enumerate() {
                        if p > row[best] {
                            best = c;
                        }
                    }
                    best
                }
            })
            .collect())
    }

    pub fn predict_class_one(&self, x: &[f64]) -> Result<usize> {
        let batch = Matrix::from_vec(1, x.len(), x.to_vec())?;
        Ok(self.predict_class(&batch)?[0])
    }
}

impl Predictor for MLPModel {
    fn n_features(&self) -> usize {
        self.w1.rows()
    }

    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn predict_proba(&self, batch: &Matrix) -> Result<Matrix> {
        let mut logits = self.logits_batch(batch)?;
        match self.output {
            OutputKind::SigmoidBinary => {
                for i in 0..logits.rows() {
                    let l = logits.get(i, 0);
                    logits.set(i, 0, 1.0 / (1.0 + (-l).exp()));
                }
            }
            OutputKind::SoftmaxMulticlass => {
                for i in 0..logits.rows() {
                    let row = logits.row_mut(i);
                    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let mut sum = 0.0;
                    for v in row.iter_mut() {
                        *v = (*v - max).exp();
                        sum += *v;
                    }
                    for v in row.iter_mut() {
                        *v /= sum;
                    }
                }
            }
        }
        Ok(logits)
    }
}
