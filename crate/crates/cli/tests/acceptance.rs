//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p tabattr-cli --test acceptance -- --nocapture` to
//! see the lines for passing criteria too.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use tabattr_cli::config::ExperimentConfig;
use tabattr_cli::manifest::{CellStatus, RunManifest};
use tabattr_cli::{plotdata, runner};

use tabattr_core::ablation::{ablation_curve, random_control_curve, CurveMeta, RankingMode};
use tabattr_core::attribution::{
    deeplift_rescale, integrated_gradients, kernel_shap, AttributionConfig, ValueKind,
};
use tabattr_core::baselines::{
    check_deterministic, check_static, declared_taxonomy, generate, BaselineSpec, ConstantValue,
};
use tabattr_core::data::synth_dataset;
use tabattr_core::model::{
    class_probability, train, MLPModel, OutputKind, Predictor, TrainConfig,
};
use tabattr_core::numerics::{Matrix, Rng};

fn conclude(number: u32, name: &str, started: Instant, outcome: Result<(), String>) {
    let seconds = started.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => println!("criterion {number} ({name}): PASS ({seconds:.1}s)"),
        Err(detail) => {
            println!("criterion {number} ({name}): FAIL ({seconds:.1}s): {detail}");
            panic!("criterion {number} ({name}) failed: {detail}");
        }
    }
}

fn check_runtime(limit: Duration, started: Instant, context: &str) -> Result<(), String> {
    let elapsed = started.elapsed();
    if elapsed > limit {
        return Err(format!(
            "{context} took {:.1}s, limit {:.1}s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        ));
    }
    Ok(())
}

fn six_baselines() -> Vec<BaselineSpec> {
    vec![
        BaselineSpec::Constant {
            value: ConstantValue::Scalar(0.0),
        },
        BaselineSpec::MaxDistance,
        BaselineSpec::Blurred {
            sigma: 1.0,
            radius: 2,
            permutations: 1000,
        },
        BaselineSpec::Gaussian { sigma: 1.0 },
        BaselineSpec::Uniform { ranges: None },
        BaselineSpec::Expectation { sample_size: 100 },
    ]
}

/// 1. Empirical taxonomy checks reproduce all six declared rows
///    (100 observation pairs, 20 repeat runs), in under 10 s.
#[test]
fn c1_taxonomy_conformance() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let mut rng = Rng::new(101);
        let dataset =
            synth_dataset(400, 6, &[0, 1], &mut rng).map_err(|e| e.to_string())?;
        for spec in six_baselines() {
            let declared = declared_taxonomy(&spec);
            let mut static_rng = rng.split(&format!("static:{}", spec.name()));
            let spatial = check_static(&spec, &dataset, 100, &mut static_rng)
                .map_err(|e| e.to_string())?
                .as_spatial();
            let mut det_rng = rng.split(&format!("det:{}", spec.name()));
            let probe = dataset.row(dataset.test_indices()[0]);
            let variability = check_deterministic(&spec, probe, &dataset, 20, &mut det_rng)
                .map_err(|e| e.to_string())?
                .as_variability();
            if spatial != declared.spatial || variability != declared.variability {
                return Err(format!(
                    "{}: empirical ({spatial:?}, {variability:?}) vs declared \
                     ({:?}, {:?})",
                    spec.name(),
                    declared.spatial,
                    declared.variability
                ));
            }
        }
        check_runtime(Duration::from_secs(10), started, "taxonomy sweep")
    })();
    conclude(1, "taxonomy conformance", started, outcome);
}

/// Shared triples for criteria 2 and 3: 10 trained models x 5 (row, baseline)
/// combinations cycling through all six baseline methods.
fn completeness_triples() -> Vec<(MLPModel, Vec<f64>, Vec<f64>, usize)> {
    let specs = six_baselines();
    let mut triples = Vec::new();
    for seed in 0..10u64 {
        let mut rng = Rng::new(7000 + seed);
        let dataset = synth_dataset(300, 5, &[0, 1], &mut rng).unwrap();
        let model = train(
            &dataset,
            &TrainConfig {
                hidden_units: 16,
                epochs: 15,
                seed,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        let mut baseline_rng = rng.split("baselines");
        for i in 0..5 {
            let row = dataset.test_indices()[i];
            let x = dataset.row(row).to_vec();
            let spec = &specs[(seed as usize * 5 + i) % specs.len()];
            let baseline = generate(spec, &x, &dataset, &mut baseline_rng).unwrap();
            let class = model.predict_class_one(&x).unwrap();
            triples.push((model.clone(), x, baseline.values, class));
        }
    }
    triples
}

/// 2. IG completeness at m=300 within 1e-3·(1+|Δlogit|) on 50 random
///    (trained MLP, test row, baseline) triples, in under 30 s.
///
/// The attributed logit of a ReLU net is piecewise linear along the path, so
/// the pinned midpoint rule carries O(1/m) kink error; measurements put it at
/// 1e-3..2e-2 for trained models at m=300, above this tolerance for some
/// triples, while the m=30000 errors (printed below) meet it easily. The
/// criterion is asserted exactly as stated.
#[test]
fn c2_ig_completeness() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let triples = completeness_triples();
        assert_eq!(triples.len(), 50);
        let mut failures = 0;
        let mut worst: (f64, f64) = (0.0, 0.0); // (error/tolerance, error)
        let mut worst_limit = 0.0f64;
        for (model, x, baseline, class) in &triples {
            let delta = model.class_logit(x, *class).unwrap()
                - model.class_logit(baseline, *class).unwrap();
            let tolerance = 1e-3 * (1.0 + delta.abs());

            let a = integrated_gradients(model, x, baseline, *class, 300).unwrap();
            let error = (a.iter().sum::<f64>() - delta).abs();
            if error > tolerance {
                failures += 1;
            }
            if error / tolerance > worst.0 {
                worst = (error / tolerance, error);
            }

            let fine = integrated_gradients(model, x, baseline, *class, 30_000).unwrap();
            let fine_error = (fine.iter().sum::<f64>() - delta).abs();
            worst_limit = worst_limit.max(fine_error / tolerance);
        }
        println!(
            "  [diagnostic] m=300: {failures}/50 triples over tolerance, worst \
             {:.2}x (abs {:.2e}); m=30000 quadrature limit: worst {:.3}x tolerance",
            worst.0, worst.1, worst_limit
        );
        check_runtime(Duration::from_secs(30), started, "ig completeness")?;
        if failures > 0 {
            return Err(format!(
                "{failures}/50 triples exceed 1e-3·(1+|Δ|) at m=300 (worst {:.2}x); \
                 midpoint-rule kink error is O(1/m) and meets the tolerance at \
                 m=30000 ({:.3}x), so the formula is sound but the pinned step \
                 count is not",
                worst.0, worst_limit
            ));
        }
        Ok(())
    })();
    conclude(2, "ig completeness", started, outcome);
}

/// 3. DeepLIFT completeness on the same triples within 1e-10.
#[test]
fn c3_deeplift_completeness() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        for (model, x, baseline, class) in &completeness_triples() {
            let delta = model.class_logit(x, *class).unwrap()
                - model.class_logit(baseline, *class).unwrap();
            let a = deeplift_rescale(model, x, baseline, *class).unwrap();
            let error = (a.iter().sum::<f64>() - delta).abs();
            if error > 1e-10 {
                return Err(format!("completeness error {error:.2e} > 1e-10"));
            }
        }
        Ok(())
    })();
    conclude(3, "deeplift exact completeness", started, outcome);
}

fn random_binary_model(rng: &mut Rng, features: usize, hidden: usize) -> MLPModel {
    let w1: Vec<f64> = (0..features * hidden)
        .map(|_| rng.normal(0.0, 0.8).unwrap())
        .collect();
    let b1: Vec<f64> = (0..hidden).map(|_| rng.normal(0.0, 0.3).unwrap()).collect();
    let w2: Vec<f64> = (0..hidden).map(|_| rng.normal(0.0, 0.8).unwrap()).collect();
    MLPModel::new(
        Matrix::from_vec(features, hidden, w1).unwrap(),
        b1,
        Matrix::from_vec(hidden, 1, w2).unwrap(),
        vec![0.1],
        OutputKind::SigmoidBinary,
        2,
    )
    .unwrap()
}

/// 4. Exhaustive KernelSHAP equals factorial-weight brute-force Shapley on
///    20 random models with M in 2..=8, within 1e-6, in under 60 s.
#[test]
fn c4_shapley_oracle_equivalence() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let config = AttributionConfig::default();
        let mut rng = Rng::new(404);
        for trial in 0..20usize {
            let m = 2 + (trial % 7);
            let model = random_binary_model(&mut rng, m, 6);
            let x: Vec<f64> = (0..m).map(|_| rng.normal(0.0, 1.0).unwrap()).collect();
            let b: Vec<f64> = (0..m).map(|_| rng.normal(0.0, 1.0).unwrap()).collect();
            let phi = kernel_shap(&model, &x, &b, 1, &config, &mut rng)
                .map_err(|e| e.to_string())?;
            let oracle = tabattr_testkit::brute_force_shapley(m, |mask| {
                let point: Vec<f64> =
                    (0..m).map(|j| if mask[j] { x[j] } else { b[j] }).collect();
                let proba = model
                    .predict_proba(&Matrix::from_vec(1, m, point).unwrap())
                    .unwrap();
                class_probability(proba.row(0), 1)
            });
            for (ours, theirs) in phi.iter().zip(&oracle) {
                if (ours - theirs).abs() > 1e-6 {
                    return Err(format!(
                        "trial {trial} (M={m}): kernel_shap {ours} vs oracle {theirs}"
                    ));
                }
            }
        }
        check_runtime(Duration::from_secs(60), started, "shapley equivalence")
    })();
    conclude(4, "shapley oracle equivalence", started, outcome);
}

/// 5. On a purely linear model, IG, DeepLIFT and exhaustive
///    KernelSHAP-on-logits all return w_i (x_i - b_i) within 1e-6.
#[test]
fn c5_cross_method_linear_agreement() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        // hidden layer pinned into its active region: logit = w . x exactly
        let weights = [1.3, -0.8, 0.45, 0.1, -0.25];
        let m = weights.len();
        let shift = 50.0;
        let mut w1 = Matrix::zeros(m, m);
        for i in 0..m {
            w1.set(i, i, 1.0);
        }
        let mut w2 = Matrix::zeros(m, 1);
        for (h, w) in weights.iter().enumerate() {
            w2.set(h, 0, *w);
        }
        let bias = -shift * weights.iter().sum::<f64>();
        let model = MLPModel::new(
            w1,
            vec![shift; m],
            w2,
            vec![bias],
            OutputKind::SigmoidBinary,
            2,
        )
        .unwrap();

        let x = [0.9, -1.4, 0.2, 2.0, -0.6];
        let b = [-0.1, 0.5, 0.0, 1.2, 0.4];
        let expected: Vec<f64> = weights
            .iter()
            .zip(x.iter().zip(&b))
            .map(|(w, (xi, bi))| w * (xi - bi))
            .collect();

        let ig = integrated_gradients(&model, &x, &b, 1, 300).unwrap();
        let dl = deeplift_rescale(&model, &x, &b, 1).unwrap();
        let ks = kernel_shap(
            &model,
            &x,
            &b,
            1,
            &AttributionConfig {
                kshap_value: ValueKind::Logit,
                ..AttributionConfig::default()
            },
            &mut Rng::new(5),
        )
        .unwrap();
        for j in 0..m {
            for (name, got) in [("ig", ig[j]), ("deeplift", dl[j]), ("kernel_shap", ks[j])] {
                if (got - expected[j]).abs() > 1e-6 {
                    return Err(format!(
                        "{name}[{j}] = {got}, closed form {}",
                        expected[j]
                    ));
                }
            }
        }
        Ok(())
    })();
    conclude(5, "cross-method linear agreement", started, outcome);
}

/// 6. Analytic input gradients match central finite differences (h=1e-5)
///    within 1e-5 on 50 random (model, input) pairs away from ReLU kinks.
#[test]
fn c6_gradient_correctness() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let mut rng = Rng::new(606);
        let mut checked = 0;
        while checked < 50 {
            let m = 3 + (checked % 5);
            let hidden = 4 + (checked % 6);
            let model = random_binary_model(&mut rng, m, hidden);
            let x: Vec<f64> = (0..m).map(|_| rng.normal(0.0, 1.0).unwrap()).collect();
            let z = model.hidden_preactivations(&x).unwrap();
            if z.iter().any(|zh| zh.abs() < 1e-4) {
                continue; // too close to a kink for clean differences
            }
            let analytic = model.input_gradient(&x, 0).unwrap();
            let numeric = tabattr_testkit::central_difference(
                |point| model.logits(point).unwrap()[0],
                &x,
                1e-5,
            );
            for (a, n) in analytic.iter().zip(&numeric) {
                if (a - n).abs() > 1e-5 {
                    return Err(format!("analytic {a} vs numeric {n}"));
                }
            }
            checked += 1;
        }
        Ok(())
    })();
    conclude(6, "gradient correctness", started, outcome);
}

/// 7. Ablation sanity on synthetic data (n=2000, M=10, informative {0,1},
///    20 seeds): oracle rankings sit at least 0.02 below the random control
///    at K=20 on average; K=0 matches the unmasked F1 bit-exactly; K=100
///    coincides across rankings under a shared noise stream.
#[test]
fn c7_ablation_sanity() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let k_grid: Vec<f64> = (0..=10).map(|k| k as f64 * 10.0).collect();
        let mut oracle_sum = 0.0;
        let mut control_sum = 0.0;
        let seeds = 20u64;
        for seed in 0..seeds {
            let mut rng = Rng::new(70_000 + seed);
            let dataset = synth_dataset(2000, 10, &[0, 1], &mut rng).unwrap();
            let model = train(
                &dataset,
                &TrainConfig {
                    hidden_units: 16,
                    epochs: 20,
                    seed,
                    ..TrainConfig::default()
                },
            )
            .unwrap();
            let rows = dataset.test_indices().to_vec();
            let oracle_scores: Vec<Vec<f64>> = rows
                .iter()
                .map(|_| {
                    let mut a = vec![0.0; 10];
                    a[0] = 1.0;
                    a[1] = 0.9;
                    a
                })
                .collect();
            let meta = |tag: &str| CurveMeta {
                dataset: "synth".into(),
                attribution_method: tag.into(),
                baseline_method: "oracle".into(),
                seed,
            };
            let shared = rng.split("ablation");
            let oracle = ablation_curve(
                &model,
                &dataset,
                &rows,
                &oracle_scores,
                RankingMode::Signed,
                &k_grid,
                3,
                &shared,
                meta("oracle"),
            )
            .unwrap();
            let control =
                random_control_curve(&model, &dataset, &rows, &k_grid, 3, &shared, meta("control"))
                    .unwrap();

            if oracle.f1_mean[0].to_bits() != control.f1_mean[0].to_bits() {
                return Err(format!(
                    "seed {seed}: K=0 points differ ({} vs {})",
                    oracle.f1_mean[0], control.f1_mean[0]
                ));
            }
            let last = k_grid.len() - 1;
            if oracle.f1_mean[last].to_bits() != control.f1_mean[last].to_bits() {
                return Err(format!(
                    "seed {seed}: K=100 points differ under a shared stream ({} vs {})",
                    oracle.f1_mean[last], control.f1_mean[last]
                ));
            }
            oracle_sum += oracle.f1_mean[2]; // K = 20
            control_sum += control.f1_mean[2];
        }
        let oracle_mean = oracle_sum / seeds as f64;
        let control_mean = control_sum / seeds as f64;
        println!(
            "  [diagnostic] mean F1 at K=20: oracle {oracle_mean:.4}, control {control_mean:.4}"
        );
        if oracle_mean > control_mean - 0.02 {
            return Err(format!(
                "oracle ranking not at least 0.02 below control at K=20: \
                 {oracle_mean:.4} vs {control_mean:.4}"
            ));
        }
        Ok(())
    })();
    conclude(7, "ablation sanity", started, outcome);
}

/// Deterministic COMPAS-shaped fixture: 11 mixed features, two classes,
/// some missing cells, mild signal in a few columns.
fn write_compas_like(dir: &Path) -> (PathBuf, PathBuf) {
    let mut rng = Rng::new(20_240_811);
    let n = 1500;
    let races = ["group_a", "group_b", "group_c"];
    let mut csv = String::from(
        "age,priors_count,juv_fel_count,days_in_jail,decile_score,length_of_stay,\
         score_a,score_b,sex,race,charge_degree,two_year_recid\n",
    );
    for _ in 0..n {
        let age_z = rng.normal(0.0, 1.0).unwrap();
        let priors_z = rng.normal(0.0, 1.0).unwrap();
        let charge_felony = rng.unit() < 0.4;
        let noise = rng.normal(0.0, 0.6).unwrap();
        let score = 0.9 * priors_z - 0.5 * age_z + if charge_felony { 0.5 } else { -0.2 } + noise;
        let label = usize::from(score > 0.0);

        let age = 18.0 + (age_z.abs() * 12.0 + rng.unit() * 30.0);
        let priors = (priors_z.abs() * 3.0).round();
        let juv = (rng.unit() * 3.0).floor();
        let jail = (rng.unit() * 200.0).round();
        let decile = 1.0 + (rng.unit() * 9.0).floor();
        let stay = (rng.unit() * 400.0).round();
        let score_a = rng.normal(0.0, 1.0).unwrap();
        let score_b = rng.normal(0.0, 1.0).unwrap();
        let sex = if rng.unit() < 0.8 { "male" } else { "female" };
        let race = races[rng.index(3)];
        let charge = if charge_felony { "F" } else { "M" };

        // ~5% missing cells in two numeric columns
        let jail_cell = if rng.unit() < 0.05 {
            "NA".to_string()
        } else {
            format!("{jail}")
        };
        let stay_cell = if rng.unit() < 0.05 {
            "NA".to_string()
        } else {
            format!("{stay}")
        };
        csv.push_str(&format!(
            "{age:.2},{priors},{juv},{jail_cell},{decile},{stay_cell},{score_a:.4},{score_b:.4},\
             {sex},{race},{charge},{label}\n"
        ));
    }
    let csv_path = dir.join("compas_like.csv");
    std::fs::write(&csv_path, csv).unwrap();

    let schema = r#"label = "two_year_recid"

[[feature]]
name = "age"
kind = "continuous"

[[feature]]
name = "priors_count"
kind = "continuous"

[[feature]]
name = "juv_fel_count"
kind = "continuous"

[[feature]]
name = "days_in_jail"
kind = "continuous"

[[feature]]
name = "decile_score"
kind = "continuous"

[[feature]]
name = "length_of_stay"
kind = "continuous"

[[feature]]
name = "score_a"
kind = "continuous"

[[feature]]
name = "score_b"
kind = "continuous"

[[feature]]
name = "sex"
kind = "categorical"
categories = ["male", "female"]

[[feature]]
name = "race"
kind = "categorical"

[[feature]]
name = "charge_degree"
kind = "categorical"
"#;
    let schema_path = dir.join("compas_like.schema.toml");
    std::fs::write(&schema_path, schema).unwrap();
    (csv_path, schema_path)
}

fn full_matrix_config(dir: &Path) -> PathBuf {
    write_compas_like(dir);
    let config = r#"
master_seed = 811

[model]
hidden_units = 32
learning_rate = 0.05
epochs = 50
batch_size = 32

[attribution]
methods = ["ig", "deeplift", "kernel_shap", "deep_shap"]
ig_steps = 300
kshap_samples = 2048
kshap_exhaustive_threshold = 12
deepshap_background_size = 20

[ablation]
k_grid = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0]
ranking = "signed"
repeats = 10

[[datasets]]
name = "synth"
synthetic = { rows = 2000, features = 10, informative = [0, 1] }

[[datasets]]
name = "compas_like"
csv = "compas_like.csv"
schema = "compas_like.schema.toml"
train_fraction = 0.8
missing_token = "NA"
missing_threshold = 750

[[baselines]]
method = "constant"

[[baselines]]
method = "max_distance"

[[baselines]]
method = "blurred"
sigma = 1.0
radius = 2
permutations = 25

[[baselines]]
method = "gaussian"
sigma = 1.0

[[baselines]]
method = "uniform"

[[baselines]]
method = "expectation"
sample_size = 100
"#;
    let path = dir.join("full_matrix.toml");
    std::fs::write(&path, config).unwrap();
    path
}

/// 8. The full 6-baseline x 4-method matrix over the synthetic dataset and a
///    small mixed-type real-shaped CSV completes in under 15 minutes and
///    emits well-formed per-dataset and aggregate curve CSVs with the full
///    cell census; the area-under-curve ordering is printed as a soft report.
#[test]
fn c8_full_matrix_desk_scale() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let dir = tempfile::tempdir().unwrap();
        let config_path = full_matrix_config(dir.path());
        let config = ExperimentConfig::load(&config_path).map_err(|e| e.to_string())?;
        let report = config.validate();
        if !report.is_ok() {
            return Err(format!("config invalid: {:?}", report.errors));
        }
        let out = dir.path().join("run");
        let summary = runner::run(&config, &out, 811).map_err(|e| format!("{e:#}"))?;
        if summary.cells_total != 48 {
            return Err(format!("expected 48 cells, got {}", summary.cells_total));
        }
        if summary.cells_failed != 0 {
            return Err(format!("{} cells failed", summary.cells_failed));
        }
        for line in &summary.report_lines {
            println!("  [report] {line}");
        }

        let manifest = RunManifest::load(&out).map_err(|e| e.to_string())?;
        if manifest.cells.iter().any(|c| c.status != CellStatus::Ok) {
            return Err("manifest reports non-ok cells".into());
        }

        let bundle = plotdata::emit(&out).map_err(|e| format!("{e:#}"))?;
        if bundle.per_dataset.len() != 2 {
            return Err(format!(
                "expected 2 per-dataset plot files, got {}",
                bundle.per_dataset.len()
            ));
        }
        for path in &bundle.per_dataset {
            let rows = plotdata::read_curve_csv(path).map_err(|e| e.to_string())?;
            let mut groups: Vec<(String, String)> = rows
                .iter()
                .map(|r| (r.attribution_method.clone(), r.baseline_method.clone()))
                .collect();
            groups.sort();
            groups.dedup();
            // 4 methods x 6 baselines + the random control
            if groups.len() != 25 {
                return Err(format!(
                    "{}: expected 25 curve groups, got {}",
                    path.display(),
                    groups.len()
                ));
            }
        }
        let aggregate = std::fs::read_to_string(&bundle.aggregate).map_err(|e| e.to_string())?;
        let rows = aggregate.lines().count() - 1;
        if rows != 10 * 4 * 6 {
            return Err(format!("aggregate has {rows} rows, expected 240"));
        }
        check_runtime(Duration::from_secs(900), started, "full matrix")
    })();
    conclude(8, "full-matrix desk-scale run", started, outcome);
}

/// 9. Two runs of the criterion-8 config with the same master seed produce
///    byte-identical CSVs (and model files).
#[test]
fn c9_determinism() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let dir = tempfile::tempdir().unwrap();
        let config_path = full_matrix_config(dir.path());
        let config = ExperimentConfig::load(&config_path).map_err(|e| e.to_string())?;
        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        let first = runner::run(&config, &out_a, 811).map_err(|e| format!("{e:#}"))?;
        let second = runner::run(&config, &out_b, 811).map_err(|e| format!("{e:#}"))?;
        if first.cells_failed != 0 || second.cells_failed != 0 {
            return Err("cells failed".into());
        }
        plotdata::emit(&out_a).map_err(|e| e.to_string())?;
        plotdata::emit(&out_b).map_err(|e| e.to_string())?;

        let mut names: Vec<String> = std::fs::read_dir(&out_a)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".csv") || n.ends_with(".txt"))
            .collect();
        names.sort();
        if names.len() < 48 * 2 + 2 + 2 + 3 {
            return Err(format!("unexpectedly few artifacts: {}", names.len()));
        }
        for name in names {
            let a = std::fs::read(out_a.join(&name)).map_err(|e| e.to_string())?;
            let b = std::fs::read(out_b.join(&name)).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("artifact '{name}' differs between equal-seed runs"));
            }
        }
        Ok(())
    })();
    conclude(9, "end-to-end determinism", started, outcome);
}
