//! Baseline (reference input) generators and their taxonomy.
//!
//! Six methods sit behind [`generate`]: constant, maximum-distance, blurred,
//! Gaussian, uniform and expectation. Each carries a declared taxonomy label
//! on two axes: static/dynamic (does the baseline depend on the observation
//! being explained?) and deterministic/stochastic (can repeated calls for
//! the same observation differ?), and [`check_static`] /
//! [`check_deterministic`] verify those labels empirically.
//!
//! Stream discipline: gaussian, uniform and blurred consume the random
//! stream they are handed positionally, so two generate calls against one
//! shared stream see different draws. The expectation baseline instead draws
//! its reference sample from a label-split child of the stream, which
//! depends only on the stream's seed: every call sharing one stream sees the
//! same reference sample (static across observations), while calls on
//! independently seeded streams see different samples (stochastic across
//! runs). This is exactly what makes the empirical checks reproduce the
//! declared table.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Rng;

/// Payload of the constant baseline: one value broadcast over all features,
/// or an explicit per-feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstantValue {
    Scalar(f64),
    PerFeature(Vec<f64>),
}

fn default_constant() -> ConstantValue {
    // features are standardized, so zero is the post-scaling feature mean
    ConstantValue::Scalar(0.0)
}

fn default_blur_sigma() -> f64 {
    1.0
}

fn default_blur_radius() -> usize {
    2
}

fn default_blur_permutations() -> usize {
    1000
}

fn default_gaussian_sigma() -> f64 {
    1.0
}

fn default_expectation_samples() -> usize {
    100
}

/// A configured baseline method. The serde shape doubles as the
/// `[[baselines]]` block of the experiment config file (key `method` plus
/// the per-method parameters shown here).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BaselineSpec {
    /// A fixed vector specified once, independent of everything.
    Constant {
        #[serde(default = "default_constant")]
        value: ConstantValue,
    },
    /// The training observation furthest from `x` in l1 distance, ties
    /// broken toward the lowest row index.
    MaxDistance,
    /// Gaussian-blur `x` along random feature orderings and average.
    Blurred {
        #[serde(default = "default_blur_sigma")]
        sigma: f64,
        #[serde(default = "default_blur_radius")]
        radius: usize,
        #[serde(default = "default_blur_permutations")]
        permutations: usize,
    },
    /// Per-feature normal noise centered at the original value.
    Gaussian {
        #[serde(default = "default_gaussian_sigma")]
        sigma: f64,
    },
    /// Independent per-feature draws from the valid feature ranges
    /// (dataset-derived unless overridden here).
    Uniform {
        #[serde(default)]
        ranges: Option<Vec<(f64, f64)>>,
    },
    /// Per-feature mean of a freshly drawn sample of training rows.
    Expectation {
        #[serde(default = "default_expectation_samples")]
        sample_size: usize,
    },
}

impl BaselineSpec {
    /// Stable identifier used in file names and CSV columns.
    pub fn name(&self) -> &'static str {
        match self {
            BaselineSpec::Constant { .. } => "constant",
            BaselineSpec::MaxDistance => "max_distance",
            BaselineSpec::Blurred { .. } => "blurred",
            BaselineSpec::Gaussian { .. } => "gaussian",
            BaselineSpec::Uniform { .. } => "uniform",
            BaselineSpec::Expectation { .. } => "expectation",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BaselineSpec::Constant { value } => match value {
                ConstantValue::Scalar(v) if !v.is_finite() => Err(Error::Parameter(
                    "constant baseline value must be finite".into(),
                )),
                ConstantValue::PerFeature(v) if v.iter().any(|x| !x.is_finite()) => Err(
                    Error::Parameter("constant baseline vector must be finite".into()),
                ),
                _ => Ok(()),
            },
            BaselineSpec::MaxDistance => Ok(()),
            BaselineSpec::Blurred {
                sigma,
                permutations,
                ..
            } => {
                if sigma.is_nan() || *sigma < 0.0 {
                    return Err(Error::Parameter(format!(
                        "blur sigma must be >= 0, got {sigma}"
                    )));
                }
                if *permutations == 0 {
                    return Err(Error::Parameter("need at least one permutation".into()));
                }
                Ok(())
            }
            BaselineSpec::Gaussian { sigma } => {
                if sigma.is_nan() || *sigma < 0.0 {
                    return Err(Error::Parameter(format!(
                        "gaussian sigma must be >= 0, got {sigma}"
                    )));
                }
                Ok(())
            }
            BaselineSpec::Uniform { ranges } => {
                if let Some(ranges) = ranges {
                    for (lo, hi) in ranges {
                        if !lo.is_finite() || !hi.is_finite() || lo > hi {
                            return Err(Error::Parameter(format!(
                                "uniform range [{lo}, {hi}] is invalid"
                            )));
                        }
                    }
                }
                Ok(())
            }
            BaselineSpec::Expectation { sample_size } => {
                if *sample_size == 0 {
                    return Err(Error::Parameter(
                        "expectation sample size must be >= 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// The reference vector a baseline method emitted for one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineVector {
    pub values: Vec<f64>,
    pub method: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spatial {
    Static,
    Dynamic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variability {
    Deterministic,
    Stochastic,
}

/// Position of a baseline method on the two taxonomy axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaxonomyLabel {
    pub spatial: Spatial,
    pub variability: Variability,
}

/// The declared taxonomy of each method.
pub fn declared_taxonomy(spec: &BaselineSpec) -> TaxonomyLabel {
    let (spatial, variability) = match spec {
        BaselineSpec::Constant { .. } => (Spatial::Static, Variability::Deterministic),
        BaselineSpec::MaxDistance => (Spatial::Dynamic, Variability::Deterministic),
        BaselineSpec::Blurred { .. } => (Spatial::Dynamic, Variability::Stochastic),
        BaselineSpec::Gaussian { .. } => (Spatial::Dynamic, Variability::Stochastic),
        BaselineSpec::Uniform { .. } => (Spatial::Dynamic, Variability::Stochastic),
        BaselineSpec::Expectation { .. } => (Spatial::Static, Variability::Stochastic),
    };
    TaxonomyLabel {
        spatial,
        variability,
    }
}

/// Draw `sample_size` distinct training rows (dataset row indices).
///
/// Shared by the expectation baseline and by DeepSHAP background
/// construction so both see the same sample under the same stream.
pub fn sample_train_rows(dataset: &Dataset, sample_size: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    let train = dataset.train_indices();
    if train.is_empty() {
        return Err(Error::Data("training split is empty".into()));
    }
    if sample_size > train.len() {
        return Err(Error::Parameter(format!(
            "expectation sample of {sample_size} exceeds {} training rows",
            train.len()
        )));
    }
    let picks = rng.sample_without_replacement(train.len(), sample_size)?;
    Ok(picks.into_iter().map(|p| train[p]).collect())
}

/// Truncated, normalised Gaussian kernel of the given radius. `sigma == 0`
/// degenerates to the identity (delta) kernel.
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let mut kernel = vec![0.0; 2 * radius + 1];
    if sigma == 0.0 || radius == 0 {
        kernel[radius] = 1.0;
        return kernel;
    }
    for (k, w) in kernel.iter_mut().enumerate() {
        let d = k as f64 - radius as f64;
        *w = (-d * d / (2.0 * sigma * sigma)).exp();
    }
    let sum: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= sum;
    }
    kernel
}

/// Blur `x` along each given feature ordering (clamp-to-edge padding) and
/// average the results.
pub fn blur_with_permutations(
    x: &[f64],
    permutations: &[Vec<usize>],
    sigma: f64,
    radius: usize,
) -> Vec<f64> {
    let m = x.len();
    let kernel = gaussian_kernel(sigma, radius);
    let r = radius as isize;
    let mut accum = vec![0.0; m];
    let mut arranged = vec![0.0; m];
    for perm in permutations {
        for (slot, &feature) in perm.iter().enumerate() {
            arranged[slot] = x[feature];
        }
        for (slot, &feature) in perm.iter().enumerate() {
            let mut value = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                let neighbour = (slot as isize + k as isize - r).clamp(0, m as isize - 1);
                value += w * arranged[neighbour as usize];
            }
            accum[feature] += value;
        }
    }
    for v in &mut accum {
        *v /= permutations.len() as f64;
    }
    accum
}

/// Generate the baseline for observation `x`.
pub fn generate(
    spec: &BaselineSpec,
    x: &[f64],
    dataset: &Dataset,
    rng: &mut Rng,
) -> Result<BaselineVector> {
    spec.validate()?;
    let m = dataset.n_features();
    if x.len() != m {
        return Err(Error::Shape(format!(
            "observation has {} features, dataset has {m}",
            x.len()
        )));
    }
    let values = match spec {
        BaselineSpec::Constant { value } => match value {
            ConstantValue::Scalar(v) => vec![*v; m],
            ConstantValue::PerFeature(v) => {
                if v.len() != m {
                    return Err(Error::Shape(format!(
                        "constant baseline has {} entries for {m} features",
                        v.len()
                    )));
                }
                v.clone()
            }
        },
        BaselineSpec::MaxDistance => {
            let train = dataset.train_indices();
            if train.is_empty() {
                return Err(Error::Data("training split is empty".into()));
            }
            let mut best_row = train[0];
            let mut best_distance = f64::NEG_INFINITY;
            for &row in train {
                let distance: f64 = dataset
                    .row(row)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                if distance > best_distance {
                    best_distance = distance;
                    best_row = row;
                }
            }
            dataset.row(best_row).to_vec()
        }
        BaselineSpec::Blurred {
            sigma,
            radius,
            permutations,
        } => {
            let perms: Vec<Vec<usize>> =
                (0..*permutations).map(|_| rng.permutation(m)).collect();
            blur_with_permutations(x, &perms, *sigma, *radius)
        }
        BaselineSpec::Gaussian { sigma } => x
            .iter()
            .map(|&xi| rng.normal(xi, *sigma))
            .collect::<Result<_>>()?,
        BaselineSpec::Uniform { ranges } => {
            let ranges = match ranges {
                Some(r) => {
                    if r.len() != m {
                        return Err(Error::Shape(format!(
                            "uniform baseline has {} ranges for {m} features",
                            r.len()
                        )));
                    }
                    r.clone()
                }
                None => dataset.valid_ranges(),
            };
            ranges
                .iter()
                .map(|&(lo, hi)| rng.uniform(lo, hi))
                .collect::<Result<_>>()?
        }
        BaselineSpec::Expectation { sample_size } => {
            // seed-addressed child: static across a shared stream, fresh
            // under independent streams
            let mut child = rng.split("expectation-sample");
            let rows = sample_train_rows(dataset, *sample_size, &mut child)?;
            let mut mean = vec![0.0; m];
            for &row in &rows {
                for (acc, v) in mean.iter_mut().zip(dataset.row(row)) {
                    *acc += v;
                }
            }
            for v in &mut mean {
                *v /= rows.len() as f64;
            }
            mean
        }
    };
    Ok(BaselineVector {
        values,
        method: spec.name(),
    })
}

/// Outcome of the empirical static/dynamic check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StaticCheck {
    Static,
    /// Two dataset rows whose baselines differed.
    Dynamic { witness: (usize, usize) },
}

impl StaticCheck {
    pub fn as_spatial(&self) -> Spatial {
        match self {
            StaticCheck::Static => Spatial::Static,
            StaticCheck::Dynamic { .. } => Spatial::Dynamic,
        }
    }
}

/// Outcome of the empirical deterministic/stochastic check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeterminismCheck {
    Deterministic,
    /// Two run indices whose baselines differed.
    Stochastic { witness: (usize, usize) },
}

impl DeterminismCheck {
    pub fn as_variability(&self) -> Variability {
        match self {
            DeterminismCheck::Deterministic => Variability::Deterministic,
            DeterminismCheck::Stochastic { .. } => Variability::Stochastic,
        }
    }
}

const CHECK_TOLERANCE: f64 = 1e-12;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Empirically decide static vs dynamic: draw observation pairs and generate
/// both baselines against one shared stream per pair, so only the dependence
/// on the observation can make them differ.
pub fn check_static(
    spec: &BaselineSpec,
    dataset: &Dataset,
    n_pairs: usize,
    rng: &mut Rng,
) -> Result<StaticCheck> {
    if n_pairs == 0 {
        return Err(Error::Parameter("need at least one pair".into()));
    }
    let n = dataset.n_rows();
    if n < 2 {
        return Err(Error::Data("need at least two observations".into()));
    }
    for pair in 0..n_pairs {
        let i = rng.index(n);
        let j = loop {
            let j = rng.index(n);
            if j != i {
                break j;
            }
        };
        let mut shared = rng.split(&format!("pair-{pair}"));
        let b_i = generate(spec, dataset.row(i), dataset, &mut shared)?;
        let b_j = generate(spec, dataset.row(j), dataset, &mut shared)?;
        if max_abs_diff(&b_i.values, &b_j.values) > CHECK_TOLERANCE {
            return Ok(StaticCheck::Dynamic { witness: (i, j) });
        }
    }
    Ok(StaticCheck::Static)
}

/// Empirically decide deterministic vs stochastic: rerun the generator for
/// one observation under independently seeded child streams.
pub fn check_deterministic(
    spec: &BaselineSpec,
    x: &[f64],
    dataset: &Dataset,
    n_runs: usize,
    rng: &mut Rng,
) -> Result<DeterminismCheck> {
    if n_runs < 2 {
        return Err(Error::Parameter("need at least two runs".into()));
    }
    let mut first: Option<BaselineVector> = None;
    for run in 0..n_runs {
        let mut child = rng.split(&format!("run-{run}"));
        let b = generate(spec, x, dataset, &mut child)?;
        match &first {
            None => first = Some(b),
            Some(reference) => {
                if max_abs_diff(&reference.values, &b.values) > CHECK_TOLERANCE {
                    return Ok(DeterminismCheck::Stochastic { witness: (0, run) });
                }
            }
        }
    }
    Ok(DeterminismCheck::Deterministic)
}

/// Run both checks and combine them into an empirical taxonomy label.
pub fn empirical_taxonomy(
    spec: &BaselineSpec,
    dataset: &Dataset,
    n_pairs: usize,
    n_runs: usize,
    rng: &mut Rng,
) -> Result<TaxonomyLabel> {
    let mut static_rng = rng.split("static-check");
    let spatial = check_static(spec, dataset, n_pairs, &mut static_rng)?.as_spatial();
    let mut det_rng = rng.split("determinism-check");
    let probe = dataset.row(dataset.test_indices().first().copied().unwrap_or(0));
    let variability =
        check_deterministic(spec, probe, dataset, n_runs, &mut det_rng)?.as_variability();
    Ok(TaxonomyLabel {
        spatial,
        variability,
    })
}
