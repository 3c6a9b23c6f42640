//! DeepLIFT with the Rescale rule, specialised to the one-hidden-layer
//! ReLU network, and DeepSHAP as its background average.

use crate::error::{Error, Result};
use crate::model::MLPModel;

/// Below this reference difference the Rescale ratio degenerates and the
/// multiplier falls back to the ReLU derivative (its analytic limit).
const MULTIPLIER_EPSILON: f64 = 1e-9;

/// DeepLIFT (Rescale) attributions of the signed class logit.
///
/// With `z = W1^T x + b1` and `z0 = W1^T b + b1`, the hidden multiplier is
/// `(relu(z_h) - relu(z0_h)) / (z_h - z0_h)`, and
/// `a_i = sum_h (x_i - b_i) W1[i,h] m_h W2[h,c]`. Attributions sum exactly
/// to the logit difference between input and baseline.
pub fn deeplift_rescale(
    model: &MLPModel,
    x: &[f64],
    baseline: &[f64],
    class: usize,
) -> Result<Vec<f64>> {
    if x.len() != baseline.len() {
        return Err(Error::Shape(format!(
            "input has {} features, baseline has {}",
            x.len(),
            baseline.len()
        )));
    }
    let (unit, sign) = model.signed_unit(class)?;
    let z = model.hidden_preactivations(x)?;
    let z0 = model.hidden_preactivations(baseline)?;

    let m = x.len();
    let mut attributions = vec![0.0; m];
    for h in 0..z.len() {
        let delta = z[h] - z0[h];
        let multiplier = if delta.abs() > MULTIPLIER_EPSILON {
            (z[h].max(0.0) - z0[h].max(0.0)) / delta
        } else if z[h] > 0.0 {
            1.0
        } else {
            0.0
        };
        if multiplier == 0.0 {
            continue;
        }
        let path = sign * multiplier * model.w2().get(h, unit);
        if path == 0.0 {
            continue;
        }
        for i in 0..m {
            attributions[i] += (x[i] - baseline[i]) * model.w1().get(i, h) * path;
        }
    }
    Ok(attributions)
}

/// DeepSHAP: DeepLIFT averaged over a background of reference vectors.
pub fn deep_shap(
    model: &MLPModel,
    x: &[f64],
    background: &[Vec<f64>],
    class: usize,
) -> Result<Vec<f64>> {
    if background.is_empty() {
        return Err(Error::Parameter("deep_shap background is empty".into()));
    }
    let mut mean = vec![0.0; x.len()];
    for reference in background {
        let a = deeplift_rescale(model, x, reference, class)?;
        for (acc, v) in mean.iter_mut().zip(&a) {
            *acc += v;
        }
    }
    for v in &mut mean {
        *v /= background.len() as f64;
    }
    Ok(mean)
}
