//! Synthetic classification data with a known informative feature set.

use crate::data::dataset::Dataset;
use crate::data::schema::FeatureSchema;
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

/// Generate `n` rows of `m` i.i.d. standard-normal features; the label is 1
/// iff the informative features sum above zero, so only those features carry
/// signal. The result is split 80/20 and standardized like any dataset.
pub fn synth_dataset(n: usize, m: usize, informative: &[usize], rng: &mut Rng) -> Result<Dataset> {
    if informative.is_empty() {
        return Err(Error::Parameter("informative set is empty".into()));
    }
    let mut seen = vec![false; m];
    for &j in informative {
        if j >= m {
            return Err(Error::Parameter(format!(
                "informative feature {j} out of range 0..{m}"
            )));
        }
        if seen[j] {
            return Err(Error::Parameter(format!("informative feature {j} repeated")));
        }
        seen[j] = true;
    }
    if n < 10 {
        return Err(Error::Parameter(format!(
            "need at least 10 rows for a meaningful split, got {n}"
        )));
    }

    let mut raw = Matrix::zeros(n, m);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..m {
            raw.set(i, j, rng.normal(0.0, 1.0)?);
        }
        let signal: f64 = informative.iter().map(|&j| raw.get(i, j)).sum();
        labels.push(usize::from(signal > 0.0));
    }

    let names: Vec<String> = (0..m).map(|j| format!("f{j}")).collect();
    let schema = FeatureSchema::all_continuous("label", &names)?;
    Dataset::from_numeric(
        raw,
        labels,
        vec!["0".into(), "1".into()],
        schema,
        0.8,
        rng,
    )
}
