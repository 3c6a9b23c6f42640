//! The four attribution algorithms behind one dispatch surface.
//!
//! Every method attributes the predicted class of the observation. Gradient
//! methods (IG, DeepLIFT, DeepSHAP) target the signed class logit; KernelSHAP
//! targets the class probability by default (see
//! [`ValueKind`]).

mod deeplift;
mod ig;
mod kernel_shap;

pub use deeplift::{deep_shap, deeplift_rescale};
pub use ig::integrated_gradients;
pub use kernel_shap::{kernel_shap, AttributionConfig, ValueKind};

use serde::{Deserialize, Serialize};

use crate::baselines::{generate, sample_train_rows, BaselineSpec, BaselineVector};
use crate::data::Dataset;
use crate::error::Result;
use crate::model::MLPModel;
use crate::numerics::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributionMethod {
    #[serde(rename = "ig")]
    IntegratedGradients,
    #[serde(rename = "deeplift")]
    DeepLift,
    KernelShap,
    DeepShap,
}

impl AttributionMethod {
    pub fn name(&self) -> &'static str {
        match self {
            AttributionMethod::IntegratedGradients => "ig",
            AttributionMethod::DeepLift => "deeplift",
            AttributionMethod::KernelShap => "kernel_shap",
            AttributionMethod::DeepShap => "deep_shap",
        }
    }

    pub fn all() -> [AttributionMethod; 4] {
        [
            AttributionMethod::IntegratedGradients,
            AttributionMethod::DeepLift,
            AttributionMethod::KernelShap,
            AttributionMethod::DeepShap,
        ]
    }
}

/// What stood in for "missing" when the attribution was computed.
#[derive(Debug, Clone, PartialEq)]
pub enum BaselineUsed {
    /// A single reference vector.
    Vector(BaselineVector),
    /// A background set (DeepSHAP, or draw-and-average runs).
    Background { size: usize },
}

/// Per-feature importance scores for one observation and one target class.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionVector {
    pub values: Vec<f64>,
    pub target_class: usize,
    pub method: &'static str,
    pub baseline_used: BaselineUsed,
    /// Seed of the stream the attribution consumed, for replay.
    pub rng_seed: u64,
}

/// Generate the baseline(s) for `x` and dispatch to the requested algorithm.
/// The target class is the model's prediction for `x`.
pub fn attribute(
    method: AttributionMethod,
    model: &MLPModel,
    x: &[f64],
    spec: &BaselineSpec,
    dataset: &Dataset,
    config: &AttributionConfig,
    rng: &mut Rng,
) -> Result<AttributionVector> {
    config.validate()?;
    spec.validate()?;
    let class = model.predict_class_one(x)?;
    let rng_seed = rng.seed();

    if method == AttributionMethod::DeepShap {
        let background = deepshap_background(model, x, spec, dataset, config, rng)?;
        let values = deep_shap(model, x, &background, class)?;
        return Ok(AttributionVector {
            values,
            target_class: class,
            method: method.name(),
            baseline_used: BaselineUsed::Background {
                size: background.len(),
            },
            rng_seed,
        });
    }

    let draws = config.baseline_draws;
    let mut mean = vec![0.0; x.len()];
    let mut first_baseline: Option<BaselineVector> = None;
    for _ in 0..draws {
        let baseline = generate(spec, x, dataset, rng)?;
        let values = match method {
            AttributionMethod::IntegratedGradients => {
                integrated_gradients(model, x, &baseline.values, class, config.ig_steps)?
            }
            AttributionMethod::DeepLift => deeplift_rescale(model, x, &baseline.values, class)?,
            AttributionMethod::KernelShap => {
                kernel_shap(model, x, &baseline.values, class, config, rng)?
            }
            AttributionMethod::DeepShap => unreachable!("handled above"),
        };
        for (acc, v) in mean.iter_mut().zip(&values) {
            *acc += v;
        }
        if first_baseline.is_none() {
            first_baseline = Some(baseline);
        }
    }
    for v in &mut mean {
        *v /= draws as f64;
    }

    Ok(AttributionVector {
        values: mean,
        target_class: class,
        method: method.name(),
        baseline_used: if draws == 1 {
            BaselineUsed::Vector(first_baseline.expect("one draw happened"))
        } else {
            BaselineUsed::Background { size: draws }
        },
        rng_seed,
    })
}

/// DeepSHAP's background references, per baseline method.
///
/// The expectation baseline contributes the sampled training rows themselves
/// (drawn from the same labelled child stream `generate` would use, so the
/// set matches the rows behind the mean vector). Other stochastic baselines
/// contribute `deepshap_background_size` independent draws; deterministic
/// baselines contribute their single vector.
fn deepshap_background(
    model: &MLPModel,
    x: &[f64],
    spec: &BaselineSpec,
    dataset: &Dataset,
    config: &AttributionConfig,
    rng: &mut Rng,
) -> Result<Vec<Vec<f64>>> {
    let _ = model;
    match spec {
        BaselineSpec::Expectation { sample_size } => {
            let mut child = rng.split("expectation-sample");
            let rows = sample_train_rows(dataset, *sample_size, &mut child)?;
            Ok(rows.into_iter().map(|r| dataset.row(r).to_vec()).collect())
        }
        BaselineSpec::Constant { .. } | BaselineSpec::MaxDistance => {
            Ok(vec![generate(spec, x, dataset, rng)?.values])
        }
        BaselineSpec::Blurred { .. }
        | BaselineSpec::Gaussian { .. }
        | BaselineSpec::Uniform { .. } => (0..config.deepshap_background_size)
            .map(|_| generate(spec, x, dataset, rng).map(|b| b.values))
            .collect(),
    }
}
