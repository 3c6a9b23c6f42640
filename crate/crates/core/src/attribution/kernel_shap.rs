//! Model-agnostic KernelSHAP: Shapley values by kernel-weighted linear
//! regression over feature coalitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{class_probability, Predictor};
use crate::numerics::{solve_wls, Matrix, Rng};

/// What the coalition value function returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    /// Probability of the target class. Fully model-agnostic; the default.
    Probability,
    /// Log-odds of the target class (binary) or its log-probability
    /// (multiclass). For the binary sigmoid head this equals the network
    /// logit, which makes cross-method comparisons exact.
    Logit,
}

/// Tuning knobs shared by all four attribution methods.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AttributionConfig {
    /// Integration steps for Integrated Gradients.
    pub ig_steps: usize,
    /// Sampled coalitions when exhaustive enumeration is off the table.
    pub kshap_samples: usize,
    /// Enumerate all `2^M` coalitions up to this feature count.
    pub kshap_exhaustive_threshold: usize,
    /// Coalition value function.
    pub kshap_value: ValueKind,
    /// Background size DeepSHAP uses for stochastic baselines.
    pub deepshap_background_size: usize,
    /// Draw-and-average count for stochastic baselines (1 = single draw).
    pub baseline_draws: usize,
}

impl Default for AttributionConfig {
    fn default() -> Self {
        Self {
            ig_steps: 300,
            kshap_samples: 2048,
            kshap_exhaustive_threshold: 12,
            kshap_value: ValueKind::Probability,
            deepshap_background_size: 20,
            baseline_draws: 1,
        }
    }
}

impl AttributionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ig_steps == 0 {
            return Err(Error::Parameter("ig_steps must be >= 1".into()));
        }
        if self.kshap_exhaustive_threshold == 0
            || self.deepshap_background_size == 0
            || self.baseline_draws == 0
        {
            return Err(Error::Parameter(
                "kshap_exhaustive_threshold, deepshap_background_size and baseline_draws must be >= 1"
                    .into(),
            ));
        }
        // 2^25 coalitions is already 33M rows; anything above that cannot be
        // meant as an exhaustive enumeration
        if self.kshap_exhaustive_threshold > 25 {
            return Err(Error::Parameter(format!(
                "kshap_exhaustive_threshold = {} is too large to enumerate",
                self.kshap_exhaustive_threshold
            )));
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut result = 1.0;
    for i in 0..k {
        result = result * (n - i) as f64 / (i + 1) as f64;
    }
    result
}

/// Shapley kernel weight for an interior coalition of size `s`.
fn kernel_weight(m: usize, s: usize) -> f64 {
    (m - 1) as f64 / (binomial(m, s) * (s * (m - s)) as f64)
}

/// Evaluate the coalition value function for a batch of masks.
fn coalition_values(
    predictor: &dyn Predictor,
    x: &[f64],
    baseline: &[f64],
    class: usize,
    masks: &[Vec<bool>],
    value: ValueKind,
) -> Result<Vec<f64>> {
    let m = x.len();
    let mut hybrids = Matrix::zeros(masks.len(), m);
    for (row, mask) in masks.iter().enumerate() {
        let slot = hybrids.row_mut(row);
        for j in 0..m {
            slot[j] = if mask[j] { x[j] } else { baseline[j] };
        }
    }
    let proba = predictor.predict_proba(&hybrids)?;
    Ok((0..masks.len())
        .map(|row| {
            let p = class_probability(proba.row(row), class);
            match value {
                ValueKind::Probability => p,
                ValueKind::Logit => {
                    // clamp so saturated probabilities stay finite
                    let p = p.clamp(1e-12, 1.0 - 1e-12);
                    if proba.cols() == 1 {
                        (p / (1.0 - p)).ln()
                    } else {
                        p.ln()
                    }
                }
            }
        })
        .collect())
}

/// KernelSHAP attributions of the target class for one observation.
///
/// Coalition vectors `z` pick each feature from `x` (set) or `baseline`
/// (unset). The empty and full coalitions are enforced exactly by
/// constraint elimination: the intercept is pinned to `v(empty)` and the
/// last feature's value is substituted by
/// `v(full) - v(empty) - sum(others)`, so the solved system has `M - 1`
/// free coefficients. Up to `kshap_exhaustive_threshold` features all
/// interior coalitions are enumerated with Shapley-kernel weights (the
/// regression then recovers exact Shapley values); above it,
/// `kshap_samples` coalitions are drawn with probability proportional to
/// the kernel and regressed with uniform weights.
pub fn kernel_shap(
    predictor: &dyn Predictor,
    x: &[f64],
    baseline: &[f64],
    class: usize,
    config: &AttributionConfig,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    config.validate()?;
    let m = x.len();
    if baseline.len() != m || predictor.n_features() != m {
        return Err(Error::Shape(format!(
            "x has {m} features, baseline {}, predictor {}",
            baseline.len(),
            predictor.n_features()
        )));
    }
    if m == 0 {
        return Ok(Vec::new());
    }

    let endpoint = coalition_values(
        predictor,
        x,
        baseline,
        class,
        &[vec![false; m], vec![true; m]],
        config.kshap_value,
    )?;
    let (v_empty, v_full) = (endpoint[0], endpoint[1]);
    let delta = v_full - v_empty;
    if m == 1 {
        return Ok(vec![delta]);
    }

    let exhaustive = m <= config.kshap_exhaustive_threshold;
    let (masks, weights) = if exhaustive {
        let total = 1usize << m;
        let mut masks = Vec::with_capacity(total - 2);
        let mut weights = Vec::with_capacity(total - 2);
        for bits in 1..total - 1 {
            let mask: Vec<bool> = (0..m).map(|j| (bits >> j) & 1 == 1).collect();
            let size = (bits as u64).count_ones() as usize;
            masks.push(mask);
            weights.push(kernel_weight(m, size));
        }
        (masks, weights)
    } else {
        if config.kshap_samples < m + 2 {
            return Err(Error::Parameter(format!(
                "kshap_samples = {} is below the minimum {} for {m} features",
                config.kshap_samples,
                m + 2
            )));
        }
        // sample sizes proportionally to the kernel mass per size, then a
        // uniform subset of that size; sampled rows carry unit weight
        let size_mass: Vec<f64> = (1..m).map(|s| 1.0 / (s * (m - s)) as f64).collect();
        let total_mass: f64 = size_mass.iter().sum();
        let mut masks = Vec::with_capacity(config.kshap_samples);
        for _ in 0..config.kshap_samples {
            let mut pick = rng.unit() * total_mass;
            let mut size = 1;
            for (i, mass) in size_mass.iter().enumerate() {
                if pick < *mass || i == size_mass.len() - 1 {
                    size = i + 1;
                    break;
                }
                pick -= mass;
            }
            let members = rng.sample_without_replacement(m, size)?;
            let mut mask = vec![false; m];
            for j in members {
                mask[j] = true;
            }
            masks.push(mask);
        }
        let weights = vec![1.0; masks.len()];
        (masks, weights)
    };

    let values = coalition_values(predictor, x, baseline, class, &masks, config.kshap_value)?;

    // eliminate the two constraints: regress on z_j - z_last
    let mut design = Matrix::zeros(masks.len(), m - 1);
    let mut targets = Vec::with_capacity(masks.len());
    for (row, mask) in masks.iter().enumerate() {
        let z_last = f64::from(u8::from(mask[m - 1]));
        let slot = design.row_mut(row);
        for j in 0..m - 1 {
            slot[j] = f64::from(u8::from(mask[j])) - z_last;
        }
        targets.push(values[row] - v_empty - z_last * delta);
    }
    let beta = solve_wls(&design, &targets, &weights)?;

    let mut phi = Vec::with_capacity(m);
    let mut allocated = 0.0;
    for b in &beta {
        phi.push(*b);
        allocated += b;
    }
    phi.push(delta - allocated);
    Ok(phi)
}
