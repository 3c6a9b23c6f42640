//! Top-K ablation benchmark: rank features by attribution, mask the top K
//! percent with random noise, measure the F1 decay, and compare against a
//! random-ranking control.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureStat};
use crate::error::{Error, Result};
use crate::model::MLPModel;
use crate::numerics::{Matrix, Rng};

/// How attribution scores are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMode {
    /// Most highly attributed first (raw scores).
    Signed,
    /// Largest magnitude first.
    Absolute,
}

/// A descending-importance permutation of the feature indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRanking {
    order: Vec<usize>,
}

impl FeatureRanking {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &j in &order {
            if j >= order.len() || seen[j] {
                return Err(Error::Parameter("ranking is not a permutation".into()));
            }
            seen[j] = true;
        }
        Ok(Self { order })
    }
}

/// Sort features by attribution score, descending; ties break toward the
/// lower feature index.
pub fn rank_features(values: &[f64], mode: RankingMode) -> FeatureRanking {
    let key = |j: usize| match mode {
        RankingMode::Signed => values[j],
        RankingMode::Absolute => values[j].abs(),
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    FeatureRanking { order }
}

/// Replace the top `ceil(M * k / 100)` ranked features of `x` with noise:
/// standard normal for continuous features (they are standardized), a
/// uniform category code for categorical ones.
///
/// Noise is drawn for every feature in feature-index order and applied only
/// to the masked set, so the value a feature receives does not depend on the
/// ranking. Under a shared stream, full masking (K = 100) therefore yields
/// the same vector for every ranking.
pub fn mask_top_k(
    x: &[f64],
    ranking: &FeatureRanking,
    k_percent: f64,
    dataset: &Dataset,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    if !(0.0..=100.0).contains(&k_percent) {
        return Err(Error::Parameter(format!(
            "k_percent must be in [0, 100], got {k_percent}"
        )));
    }
    let m = x.len();
    if ranking.order.len() != m || dataset.n_features() != m {
        return Err(Error::Shape("ranking/observation width mismatch".into()));
    }
    let masked_count = ((m as f64 * k_percent / 100.0).ceil() as usize).min(m);

    let noise: Vec<f64> = dataset
        .stats()
        .per_feature
        .iter()
        .map(|stat| match stat {
            FeatureStat::Continuous { .. } => rng.normal(0.0, 1.0),
            FeatureStat::Categorical { categories, .. } => {
                Ok(rng.index(categories.len()) as f64)
            }
        })
        .collect::<Result<_>>()?;

    let mut masked = x.to_vec();
    for &feature in ranking.order.iter().take(masked_count) {
        masked[feature] = noise[feature];
    }
    Ok(masked)
}

/// F1 flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F1Scheme {
    /// F1 of class 1.
    BinaryPositive,
    /// Unweighted mean of one-vs-rest F1 over all classes; a class with no
    /// predicted and no actual instances contributes 0.
    Macro { n_classes: usize },
}

/// Harmonic mean of precision and recall.
pub fn f1_score(predictions: &[usize], labels: &[usize], scheme: F1Scheme) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Parameter("no samples to score".into()));
    }
    if predictions.len() != labels.len() {
        return Err(Error::Parameter(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let one_vs_rest = |class: usize| -> f64 {
        let mut tp = 0.0;
        let mut fp = 0.0;
        let mut fne = 0.0;
        for (&p, &y) in predictions.iter().zip(labels) {
            match (p == class, y == class) {
                (true, true) => tp += 1.0,
                (true, false) => fp += 1.0,
                (false, true) => fne += 1.0,
                _ => {}
            }
        }
        if tp == 0.0 {
            return 0.0;
        }
        let precision = tp / (tp + fp);
        let recall = tp / (tp + fne);
        2.0 * precision * recall / (precision + recall)
    };
    match scheme {
        F1Scheme::BinaryPositive => Ok(one_vs_rest(1)),
        F1Scheme::Macro { n_classes } => {
            if n_classes == 0 {
                return Err(Error::Parameter("macro F1 needs at least one class".into()));
            }
            Ok((0..n_classes).map(one_vs_rest).sum::<f64>() / n_classes as f64)
        }
    }
}

/// Scheme used throughout the benchmark: positive-class F1 for binary
/// problems, macro F1 otherwise.
pub fn default_scheme(dataset: &Dataset) -> F1Scheme {
    if dataset.n_classes() == 2 {
        F1Scheme::BinaryPositive
    } else {
        F1Scheme::Macro {
            n_classes: dataset.n_classes(),
        }
    }
}

/// Identifies where a curve came from.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub dataset: String,
    pub attribution_method: String,
    pub baseline_method: String,
    pub seed: u64,
}

/// F1 as a function of the masked-feature percentage.
#[derive(Debug, Clone, PartialEq)]
pub struct AblationCurve {
    pub k_grid: Vec<f64>,
    /// Mean F1 over the noise repeats at each K.
    pub f1_mean: Vec<f64>,
    /// Population std over the noise repeats (0 at K = 0).
    pub f1_std: Vec<f64>,
    pub meta: CurveMeta,
}

/// Pointwise mean/std of several curves sharing a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub k_grid: Vec<f64>,
    pub mean_f1: Vec<f64>,
    pub std_f1: Vec<f64>,
    pub n_curves: usize,
}

fn validate_k_grid(k_grid: &[f64]) -> Result<()> {
    if k_grid.is_empty() {
        return Err(Error::Parameter("k_grid is empty".into()));
    }
    if k_grid[0] != 0.0 {
        return Err(Error::Parameter(format!(
            "k_grid must start at 0, starts at {}",
            k_grid[0]
        )));
    }
    for pair in k_grid.windows(2) {
        if pair[0].is_nan() || pair[1].is_nan() || pair[0] >= pair[1] {
            return Err(Error::Parameter("k_grid must be strictly increasing".into()));
        }
    }
    if *k_grid.last().unwrap() > 100.0 {
        return Err(Error::Parameter("k_grid may not exceed 100".into()));
    }
    Ok(())
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Shared protocol: mask each evaluation row by its own ranking, predict,
/// score, average over `repeats` independent noise draws.
///
/// Noise streams are split per `(K, row, repeat)` label, so results do not
/// depend on evaluation order; two calls whose `rng` share a seed see
/// identical noise regardless of the rankings.
#[allow(clippy::too_many_arguments)]
fn curve_from_rankings(
    model: &MLPModel,
    dataset: &Dataset,
    eval_rows: &[usize],
    rankings: &[FeatureRanking],
    k_grid: &[f64],
    repeats: usize,
    rng: &Rng,
    meta: CurveMeta,
) -> Result<AblationCurve> {
    validate_k_grid(k_grid)?;
    if eval_rows.is_empty() {
        return Err(Error::Parameter("no evaluation rows".into()));
    }
    if rankings.len() != eval_rows.len() {
        return Err(Error::Parameter(format!(
            "{} rankings for {} evaluation rows",
            rankings.len(),
            eval_rows.len()
        )));
    }
    if repeats == 0 {
        return Err(Error::Parameter("repeats must be >= 1".into()));
    }
    let scheme = default_scheme(dataset);
    let labels: Vec<usize> = eval_rows.iter().map(|&r| dataset.labels()[r]).collect();

    let m = dataset.n_features();
    let mut unmasked = Matrix::zeros(eval_rows.len(), m);
    for (i, &row) in eval_rows.iter().enumerate() {
        unmasked.row_mut(i).copy_from_slice(dataset.row(row));
    }
    let unmasked_f1 = f1_score(&model.predict_class(&unmasked)?, &labels, scheme)?;

    let mut f1_mean = Vec::with_capacity(k_grid.len());
    let mut f1_std = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        if k == 0.0 {
            f1_mean.push(unmasked_f1);
            f1_std.push(0.0);
            continue;
        }
        let mut scores = Vec::with_capacity(repeats);
        for rep in 0..repeats {
            let mut batch = Matrix::zeros(eval_rows.len(), m);
            for (i, &row) in eval_rows.iter().enumerate() {
                let mut noise_rng = rng.split(&format!("noise:k{k}:row{row}:rep{rep}"));
                let masked =
                    mask_top_k(dataset.row(row), &rankings[i], k, dataset, &mut noise_rng)?;
                batch.row_mut(i).copy_from_slice(&masked);
            }
            scores.push(f1_score(&model.predict_class(&batch)?, &labels, scheme)?);
        }
        let (mean, std) = mean_and_std(&scores);
        f1_mean.push(mean);
        f1_std.push(std);
    }
    Ok(AblationCurve {
        k_grid: k_grid.to_vec(),
        f1_mean,
        f1_std,
        meta,
    })
}

/// Ablation curve for attribution-derived rankings (one attribution score
/// vector per evaluation row).
#[allow(clippy::too_many_arguments)]
pub fn ablation_curve(
    model: &MLPModel,
    dataset: &Dataset,
    eval_rows: &[usize],
    attributions: &[Vec<f64>],
    mode: RankingMode,
    k_grid: &[f64],
    repeats: usize,
    rng: &Rng,
    meta: CurveMeta,
) -> Result<AblationCurve> {
    let rankings: Vec<FeatureRanking> = attributions
        .iter()
        .map(|a| rank_features(a, mode))
        .collect();
    curve_from_rankings(
        model, dataset, eval_rows, &rankings, k_grid, repeats, rng, meta,
    )
}

/// Control curve: the same protocol with a fresh uniformly random ranking
/// per evaluation row.
pub fn random_control_curve(
    model: &MLPModel,
    dataset: &Dataset,
    eval_rows: &[usize],
    k_grid: &[f64],
    repeats: usize,
    rng: &Rng,
    meta: CurveMeta,
) -> Result<AblationCurve> {
    let rankings: Vec<FeatureRanking> = eval_rows
        .iter()
        .map(|&row| {
            let mut ranking_rng = rng.split(&format!("control-ranking:row{row}"));
            FeatureRanking {
                order: ranking_rng.permutation(dataset.n_features()),
            }
        })
        .collect();
    curve_from_rankings(
        model, dataset, eval_rows, &rankings, k_grid, repeats, rng, meta,
    )
}

/// Pointwise mean and population std across curves on the same grid.
pub fn aggregate_curves(curves: &[AblationCurve]) -> Result<AggregateCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Parameter("no curves to aggregate".into()))?;
    for curve in curves {
        if curve.k_grid != first.k_grid {
            return Err(Error::Parameter("curves disagree on the k grid".into()));
        }
    }
    let mut mean_f1 = Vec::with_capacity(first.k_grid.len());
    let mut std_f1 = Vec::with_capacity(first.k_grid.len());
    for point in 0..first.k_grid.len() {
        let values: Vec<f64> = curves.iter().map(|c| c.f1_mean[point]).collect();
        let (mean, std) = mean_and_std(&values);
        mean_f1.push(mean);
        std_f1.push(std);
    }
    Ok(AggregateCurve {
        k_grid: first.k_grid.clone(),
        mean_f1,
        std_f1,
        n_curves: curves.len(),
    })
}

/// Normalised area under an F1-vs-K curve (trapezoid rule). Lower area means
/// the masking destroyed performance faster, i.e. more discriminative
/// attributions.
pub fn area_under_curve(k_grid: &[f64], f1: &[f64]) -> f64 {
    if k_grid.len() < 2 {
        return f1.first().copied().unwrap_or(0.0);
    }
    let mut area = 0.0;
    for i in 0..k_grid.len() - 1 {
        area += (k_grid[i + 1] - k_grid[i]) * (f1[i] + f1[i + 1]) / 2.0;
    }
    area / (k_grid.last().unwrap() - k_grid[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{synth_dataset, FeatureSchema, PreprocessStats};
    use crate::model::{train, TrainConfig};
    use crate::numerics::Rng;
    use proptest::prelude::*;

    #[test]
    fn signed_ranking_sorts_descending_with_index_ties() {
        assert_eq!(
            rank_features(&[0.9, 0.1, 0.5, 0.2], RankingMode::Signed).order(),
            &[0, 2, 3, 1]
        );
        assert_eq!(
            rank_features(&[0.5, 0.5], RankingMode::Signed).order(),
            &[0, 1]
        );
    }

    #[test]
    fn absolute_mode_ranks_by_magnitude() {
        assert_eq!(
            rank_features(&[-0.9, 0.1], RankingMode::Absolute).order(),
            &[0, 1]
        );
        assert_eq!(
            rank_features(&[-0.9, 0.1], RankingMode::Signed).order(),
            &[1, 0]
        );
    }

    fn toy_dataset(m: usize) -> Dataset {
        let mut rng = Rng::new(1);
        synth_dataset(40, m, &[0], &mut rng).unwrap()
    }

    #[test]
    fn k_zero_masks_nothing_and_k_100_masks_everything() {
        let ds = toy_dataset(4);
        let ranking = rank_features(&[0.4, 0.3, 0.2, 0.1], RankingMode::Signed);
        let x = [5.0, 6.0, 7.0, 8.0];
        let mut rng = Rng::new(2);
        let untouched = mask_top_k(&x, &ranking, 0.0, &ds, &mut rng).unwrap();
        assert_eq!(untouched, x.to_vec());
        let mut rng = Rng::new(2);
        let all = mask_top_k(&x, &ranking, 100.0, &ds, &mut rng).unwrap();
        assert!(all.iter().zip(&x).all(|(a, b)| a != b));
    }

    #[test]
    fn half_of_four_features_masks_exactly_the_top_two() {
        let ds = toy_dataset(4);
        let ranking = rank_features(&[0.1, 0.9, 0.5, 0.2], RankingMode::Signed);
        assert_eq!(ranking.order(), &[1, 2, 3, 0]);
        let x = [5.0, 6.0, 7.0, 8.0];
        let mut rng = Rng::new(3);
        let masked = mask_top_k(&x, &ranking, 50.0, &ds, &mut rng).unwrap();
        assert_eq!(masked[0], 5.0);
        assert_ne!(masked[1], 6.0);
        assert_ne!(masked[2], 7.0);
        assert_eq!(masked[3], 8.0);
    }

    #[test]
    fn masking_never_touches_features_outside_the_top_set() {
        let ds = toy_dataset(5);
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ranking = rank_features(&[0.5, 0.1, 0.4, 0.3, 0.2], RankingMode::Signed);
        for k in [0.0f64, 10.0, 20.0, 40.0, 60.0, 80.0, 100.0] {
            let masked_count = (5.0 * k / 100.0).ceil() as usize;
            let mut rng = Rng::new(9);
            let masked = mask_top_k(&x, &ranking, k, &ds, &mut rng).unwrap();
            for (position, &feature) in ranking.order().iter().enumerate() {
                if position >= masked_count {
                    assert_eq!(masked[feature], x[feature], "k={k} feature {feature}");
                }
            }
        }
    }

    #[test]
    fn categorical_noise_is_a_valid_code() {
        use crate::data::{FeatureSpec, FeatureStat};
        use crate::numerics::Matrix;
        let mut cat = FeatureSpec::categorical("c");
        cat.categories = Some(vec!["a".into(), "b".into(), "c".into()]);
        let schema =
            FeatureSchema::new("y", vec![FeatureSpec::continuous("x"), cat]).unwrap();
        let stats = PreprocessStats {
            per_feature: vec![
                FeatureStat::Continuous { mean: 0.0, std: 1.0 },
                FeatureStat::Categorical {
                    categories: vec!["a".into(), "b".into(), "c".into()],
                    mode_code: 0,
                },
            ],
            label_classes: vec!["0".into(), "1".into()],
        };
        let ds = Dataset::from_parts(
            Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap(),
            vec![0, 1],
            schema,
            vec![0],
            vec![1],
            stats,
        )
        .unwrap();
        let ranking = rank_features(&[0.1, 0.9], RankingMode::Signed);
        let mut rng = Rng::new(4);
        for _ in 0..50 {
            let masked = mask_top_k(&[0.3, 1.0], &ranking, 50.0, &ds, &mut rng).unwrap();
            assert!(
                [0.0, 1.0, 2.0].contains(&masked[1]),
                "invalid code {}",
                masked[1]
            );
            assert_eq!(masked[0], 0.3);
        }
    }

    #[test]
    fn f1_hand_cases() {
        assert_eq!(
            f1_score(&[1, 0, 1], &[1, 0, 1], F1Scheme::BinaryPositive).unwrap(),
            1.0
        );
        // TP=2, FP=1, FN=0 -> P = 2/3, R = 1, F1 = 0.8
        let f1 = f1_score(&[1, 1, 1], &[1, 1, 0], F1Scheme::BinaryPositive).unwrap();
        assert!((f1 - 0.8).abs() < 1e-12);
        assert_eq!(
            f1_score(&[0, 1], &[1, 0], F1Scheme::BinaryPositive).unwrap(),
            0.0
        );
        assert!(f1_score(&[], &[], F1Scheme::BinaryPositive).is_err());
        assert!(f1_score(&[1], &[1, 0], F1Scheme::BinaryPositive).is_err());
    }

    #[test]
    fn macro_f1_counts_silent_classes_as_zero() {
        // three declared classes, class 2 never predicted nor present
        let f1 = f1_score(&[0, 1, 0, 1], &[0, 1, 1, 1], F1Scheme::Macro { n_classes: 3 }).unwrap();
        // class0: P=1/2... wait: preds for class0 = {0,2}; labels class0 = {0}.
        // TP=1, FP=1, FN=0 -> F1 = 2/3; class1: TP=2, FP=0, FN=1 -> F1 = 0.8;
        // class2 contributes 0.
        assert!((f1 - (2.0 / 3.0 + 0.8) / 3.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn binary_f1_is_permutation_invariant(
            (preds, labels) in proptest::collection::vec((0usize..2, 0usize..2), 1..60)
                .prop_map(|pairs| {
                    let preds: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                    let labels: Vec<usize> = pairs.iter().map(|p| p.1).collect();
                    (preds, labels)
                }),
            seed in 0u64..1000,
        ) {
            let base = f1_score(&preds, &labels, F1Scheme::BinaryPositive).unwrap();
            let mut rng = Rng::new(seed);
            let order = rng.permutation(preds.len());
            let shuffled_preds: Vec<usize> = order.iter().map(|&i| preds[i]).collect();
            let shuffled_labels: Vec<usize> = order.iter().map(|&i| labels[i]).collect();
            let shuffled = f1_score(&shuffled_preds, &shuffled_labels, F1Scheme::BinaryPositive).unwrap();
            prop_assert_eq!(base, shuffled);
        }
    }

    fn curve_setup() -> (Dataset, MLPModel) {
        let mut rng = Rng::new(60);
        let ds = synth_dataset(300, 6, &[0, 1], &mut rng).unwrap();
        let model = train(
            &ds,
            &TrainConfig {
                epochs: 15,
                hidden_units: 8,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        (ds, model)
    }

    fn meta(tag: &str) -> CurveMeta {
        CurveMeta {
            dataset: "toy".into(),
            attribution_method: tag.into(),
            baseline_method: "constant".into(),
            seed: 0,
        }
    }

    #[test]
    fn k_zero_point_equals_unmasked_f1_for_any_ranking() {
        let (ds, model) = curve_setup();
        let rows = ds.test_indices().to_vec();
        let grid = [0.0, 50.0, 100.0];
        let attributions: Vec<Vec<f64>> = rows.iter().map(|_| vec![0.0; 6]).collect();
        let oracle: Vec<Vec<f64>> = rows
            .iter()
            .map(|_| vec![1.0, 0.9, 0.0, 0.0, 0.0, 0.0])
            .collect();
        let rng = Rng::new(500);
        let flat = ablation_curve(
            &model, &ds, &rows, &attributions, RankingMode::Signed, &grid, 3, &rng, meta("flat"),
        )
        .unwrap();
        let informed = ablation_curve(
            &model, &ds, &rows, &oracle, RankingMode::Signed, &grid, 3, &rng, meta("oracle"),
        )
        .unwrap();
        let control =
            random_control_curve(&model, &ds, &rows, &grid, 3, &rng, meta("control")).unwrap();
        assert_eq!(flat.f1_mean[0], informed.f1_mean[0]);
        assert_eq!(flat.f1_mean[0], control.f1_mean[0]);
        assert_eq!(flat.f1_std[0], 0.0);
        // degenerate all-zero attributions still yield a well-formed curve
        assert_eq!(flat.k_grid, grid.to_vec());
    }

    #[test]
    fn shared_stream_k100_coincides_for_all_rankings() {
        let (ds, model) = curve_setup();
        let rows = ds.test_indices().to_vec();
        let grid = [0.0, 100.0];
        let oracle: Vec<Vec<f64>> = rows
            .iter()
            .map(|_| vec![1.0, 0.9, 0.0, 0.0, 0.0, 0.0])
            .collect();
        let reversed: Vec<Vec<f64>> = rows
            .iter()
            .map(|_| vec![0.0, 0.0, 0.0, 0.0, 0.9, 1.0])
            .collect();
        let rng = Rng::new(321);
        let a = ablation_curve(
            &model, &ds, &rows, &oracle, RankingMode::Signed, &grid, 5, &rng, meta("a"),
        )
        .unwrap();
        let b = ablation_curve(
            &model, &ds, &rows, &reversed, RankingMode::Signed, &grid, 5, &rng, meta("b"),
        )
        .unwrap();
        let c = random_control_curve(&model, &ds, &rows, &grid, 5, &rng, meta("c")).unwrap();
        assert_eq!(a.f1_mean[1], b.f1_mean[1]);
        assert_eq!(a.f1_mean[1], c.f1_mean[1]);
    }

    #[test]
    fn aggregate_means_and_stds() {
        let mk = |values: Vec<f64>| AblationCurve {
            k_grid: vec![0.0, 50.0],
            f1_mean: values,
            f1_std: vec![0.0, 0.0],
            meta: meta("x"),
        };
        let agg = aggregate_curves(&[mk(vec![0.9, 0.5]), mk(vec![0.7, 0.3])]).unwrap();
        assert_eq!(agg.mean_f1, vec![0.8, 0.4]);
        assert!((agg.std_f1[0] - 0.1).abs() < 1e-12);

        let single = aggregate_curves(&[mk(vec![0.9, 0.5])]).unwrap();
        assert_eq!(single.mean_f1, vec![0.9, 0.5]);
        assert_eq!(single.std_f1, vec![0.0, 0.0]);

        let identical = aggregate_curves(&vec![mk(vec![0.6, 0.2]); 5]).unwrap();
        assert_eq!(identical.mean_f1, vec![0.6, 0.2]);
        assert_eq!(identical.std_f1, vec![0.0, 0.0]);

        let mismatched = AblationCurve {
            k_grid: vec![0.0, 60.0],
            f1_mean: vec![0.9, 0.5],
            f1_std: vec![0.0, 0.0],
            meta: meta("x"),
        };
        assert!(aggregate_curves(&[mk(vec![0.9, 0.5]), mismatched]).is_err());
    }

    #[test]
    fn k_grid_validation() {
        let (ds, model) = curve_setup();
        let rows = ds.test_indices().to_vec();
        let attributions: Vec<Vec<f64>> = rows.iter().map(|_| vec![0.0; 6]).collect();
        let rng = Rng::new(1);
        for bad in [vec![10.0, 20.0], vec![0.0, 20.0, 20.0], vec![0.0, 120.0]] {
            assert!(ablation_curve(
                &model, &ds, &rows, &attributions, RankingMode::Signed, &bad, 1, &rng, meta("x"),
            )
            .is_err());
        }
    }

    #[test]
    fn area_under_curve_of_constant_is_the_constant() {
        let auc = area_under_curve(&[0.0, 50.0, 100.0], &[0.8, 0.8, 0.8]);
        assert!((auc - 0.8).abs() < 1e-12);
    }
}
