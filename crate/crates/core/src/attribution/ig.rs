//! Integrated Gradients along the straight path from baseline to input.

use crate::error::{Error, Result};
use crate::model::MLPModel;

/// Midpoint-rule Integrated Gradients of the signed class logit.
///
/// `a_i = (x_i - b_i) * (1/steps) * sum_k grad_i( b + (k - 0.5)/steps * (x - b) )`
pub fn integrated_gradients(
    model: &MLPModel,
    x: &[f64],
    baseline: &[f64],
    class: usize,
    steps: usize,
) -> Result<Vec<f64>> {
    if x.len() != baseline.len() {
        return Err(Error::Shape(format!(
            "input has {} features, baseline has {}",
            x.len(),
            baseline.len()
        )));
    }
    if steps == 0 {
        return Err(Error::Parameter("need at least one integration step".into()));
    }
    let m = x.len();
    let mut accumulated = vec![0.0; m];
    let mut point = vec![0.0; m];
    for k in 0..steps {
        let alpha = (k as f64 + 0.5) / steps as f64;
        for i in 0..m {
            point[i] = baseline[i] + alpha * (x[i] - baseline[i]);
        }
        let grad = model.class_gradient(&point, class)?;
        for (acc, g) in accumulated.iter_mut().zip(&grad) {
            *acc += g;
        }
    }
    Ok(accumulated
        .iter()
        .zip(x.iter().zip(baseline))
        .map(|(acc, (xi, bi))| (xi - bi) * acc / steps as f64)
        .collect())
}
