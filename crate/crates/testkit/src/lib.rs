//! Reference oracles for the tabattr test suites.
//!
//! Everything in here is deliberately naive and self-contained so it stays
//! independent of the implementation paths it is used to check.

/// Exact Shapley values by direct enumeration of all subsets.
///
/// `value` maps a coalition mask (true = player present) to the value of the
/// game. Weights are the classic `|S|! (m - |S| - 1)! / m!` factors. Only
/// usable for small `m` (cost is `m * 2^m` evaluations).
pub fn brute_force_shapley<F>(m: usize, mut value: F) -> Vec<f64>
where
    F: FnMut(&[bool]) -> f64,
{
    assert!(m > 0 && m <= 20, "brute force only supports 1..=20 players");
    let mut factorial = vec![1.0f64; m + 1];
    for k in 1..=m {
        factorial[k] = factorial[k - 1] * k as f64;
    }

    // Memoize the 2^m coalition values.
    let mut values = vec![0.0f64; 1 << m];
    let mut mask_buf = vec![false; m];
    for (bits, memo) in values.iter_mut().enumerate() {
        for (j, slot) in mask_buf.iter_mut().enumerate() {
            *slot = (bits >> j) & 1 == 1;
        }
        *memo = value(&mask_buf);
    }

    let mut phi = vec![0.0f64; m];
    for i in 0..m {
        for bits in 0..(1usize << m) {
            if (bits >> i) & 1 == 1 {
                continue;
            }
            let s = (bits as u64).count_ones() as usize;
            let weight = factorial[s] * factorial[m - s - 1] / factorial[m];
            phi[i] += weight * (values[bits | (1 << i)] - values[bits]);
        }
    }
    phi
}

/// Central finite-difference gradient of a scalar function.
pub fn central_difference<F>(mut f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut point = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        let original = point[i];
        point[i] = original + h;
        let plus = f(&point);
        point[i] = original - h;
        let minus = f(&point);
        point[i] = original;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    grad
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot collapses to (near) zero. `a` is row-major,
/// `n x n`.
pub fn gauss_solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = m[col * n + col].abs();
        for row in (col + 1)..n {
            let cand = m[row * n + col].abs();
            if cand > pivot_abs {
                pivot_abs = cand;
                pivot_row = row;
            }
        }
        if pivot_abs < 1e-300 {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = m[col * n + col];
        for row in (col + 1)..n {
            let factor = m[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in (col + 1)..n {
            acc -= m[col * n + k] * x[k];
        }
        x[col] = acc / m[col * n + col];
    }
    Some(x)
}

/// Discrete 1-d convolution with clamp-to-edge padding.
///
/// `kernel` is centered: `kernel.len()` must be odd and `kernel[radius]` is
/// the weight of the sample itself.
pub fn convolve_clamp(signal: &[f64], kernel: &[f64]) -> Vec<f64> {
    assert!(kernel.len() % 2 == 1, "kernel must have odd length");
    let radius = (kernel.len() / 2) as isize;
    let n = signal.len() as isize;
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                let offset = k as isize - radius;
                let j = (i + offset).clamp(0, n - 1);
                acc += w * signal[j as usize];
            }
            acc
        })
        .collect()
}

/// Reference logistic regression fit by full-batch gradient descent.
///
/// `features` is row-major `n x k`. Returns the learned weights (bias last).
pub fn logistic_fit(features: &[f64], labels: &[usize], n: usize, k: usize) -> Vec<f64> {
    assert_eq!(features.len(), n * k);
    assert_eq!(labels.len(), n);
    let mut w = vec![0.0f64; k + 1];
    let lr = 0.5;
    for _ in 0..300 {
        let mut grad = vec![0.0f64; k + 1];
        for row in 0..n {
            let x = &features[row * k..(row + 1) * k];
            let z: f64 = x.iter().zip(&w).map(|(xi, wi)| xi * wi).sum::<f64>() + w[k];
            let p = 1.0 / (1.0 + (-z).exp());
            let err = p - labels[row] as f64;
            for j in 0..k {
                grad[j] += err * x[j];
            }
            grad[k] += err;
        }
        for j in 0..=k {
            w[j] -= lr * grad[j] / n as f64;
        }
    }
    w
}

/// Predict classes with weights from [`logistic_fit`].
pub fn logistic_predict(features: &[f64], w: &[f64], n: usize, k: usize) -> Vec<usize> {
    (0..n)
        .map(|row| {
            let x = &features[row * k..(row + 1) * k];
            let z: f64 = x.iter().zip(w).map(|(xi, wi)| xi * wi).sum::<f64>() + w[k];
            usize::from(z > 0.0)
        })
        .collect()
}

/// Positive-class F1, the plain three-counter version.
pub fn f1_positive(predictions: &[usize], labels: &[usize]) -> f64 {
    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut fne = 0.0;
    for (&p, &y) in predictions.iter().zip(labels) {
        match (p, y) {
            (1, 1) => tp += 1.0,
            (1, 0) => fp += 1.0,
            (0, 1) => fne += 1.0,
            _ => {}
        }
    }
    if tp == 0.0 {
        return 0.0;
    }
    let precision = tp / (tp + fp);
    let recall = tp / (tp + fne);
    2.0 * precision * recall / (precision + recall)
}
