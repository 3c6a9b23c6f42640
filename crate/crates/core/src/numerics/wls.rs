//! Weighted least squares via normal equations.

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Minimise `sum_i w_i (y_i - x_i . beta)^2`.
///
/// Solves the normal equations `X^T W X beta = X^T W y` with a Cholesky
/// factorisation. If the factorisation fails, one retry is made with a ridge
/// term `lambda = 1e-10 * trace / p` added to the diagonal; coalition designs
/// sampled by KernelSHAP can be collinear, and the tiny ridge resolves those
/// without disturbing well-posed systems.
pub fn solve_wls(design: &Matrix, targets: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    let n = design.rows();
    let p = design.cols();
    if targets.len() != n || weights.len() != n {
        return Err(Error::Shape(format!(
            "design has {n} rows but got {} targets and {} weights",
            targets.len(),
            weights.len()
        )));
    }
    if p == 0 {
        return Ok(Vec::new());
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::Parameter(format!(
            "weights must be finite and >= 0, got {w}"
        )));
    }

    // Normal equations, exploiting symmetry of X^T W X.
    let mut ata = vec![0.0f64; p * p];
    let mut atb = vec![0.0f64; p];
    for i in 0..n {
        let w = weights[i];
        if w == 0.0 {
            continue;
        }
        let row = design.row(i);
        for a in 0..p {
            let wa = w * row[a];
            atb[a] += wa * targets[i];
            for b in a..p {
                ata[a * p + b] += wa * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            ata[a * p + b] = ata[b * p + a];
        }
    }

    let trace: f64 = (0..p).map(|i| ata[i * p + i]).sum();
    match cholesky_solve(&ata, &atb, p) {
        Some(beta) => Ok(beta),
        None => {
            let ridge = 1e-10 * trace / p as f64;
            let mut regularised = ata.clone();
            for i in 0..p {
                regularised[i * p + i] += ridge;
            }
            cholesky_solve(&regularised, &atb, p).ok_or_else(|| {
                Error::Singular(format!(
                    "normal equations rank-deficient after ridge fallback (p = {p})"
                ))
            })
        }
    }
}

/// Solve `A x = b` for symmetric positive definite `A` (row-major, `p x p`).
fn cholesky_solve(a: &[f64], b: &[f64], p: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0f64; p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut sum = a[i * p + j];
            for k in 0..j {
                sum -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                if !sum.is_finite() || sum <= 0.0 {
                    return None;
                }
                l[i * p + i] = sum.sqrt();
            } else {
                l[i * p + j] = sum / l[j * p + j];
            }
        }
    }
    // Forward then backward substitution.
    let mut y = vec![0.0f64; p];
    for i in 0..p {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * p + k] * y[k];
        }
        y[i] = sum / l[i * p + i];
    }
    let mut x = vec![0.0f64; p];
    for i in (0..p).rev() {
        let mut sum = y[i];
        for k in (i + 1)..p {
            sum -= l[k * p + i] * x[k];
        }
        x[i] = sum / l[i * p + i];
    }
    Some(x)
}
