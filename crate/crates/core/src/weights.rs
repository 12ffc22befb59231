//! Weight vectors and consistency metrics for a complete judgment matrix.
//!
//! Two weight routes are provided: the column-normalization average used by
//! the elicitation software, and the dominant (Perron) eigenvector found by
//! power iteration. `CR = CI / RI` with `RI = 1.98 (h - 2) / h`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::JudgmentMatrix;

/// Power iteration stops after this many steps without convergence.
pub const MAX_POWER_ITERATIONS: usize = 10_000;
/// Relative tolerance on successive eigenvalue estimates.
pub const POWER_TOLERANCE: f64 = 1e-12;
/// Largest consistency ratio still considered acceptable.
pub const CR_THRESHOLD: f64 = 0.1;

/// Normalized importance coefficients, one per object, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Normalizes `raw` to unit sum.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if raw.is_empty() || !(total.is_finite() && total > 0.0) || raw.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::Format("weight vector must be nonnegative with positive sum".into()));
        }
        Ok(WeightVector(raw.into_iter().map(|x| x / total).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Index of the largest weight (first one on ties).
    pub fn argmax(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &x)| if x > best.1 { (k, x) } else { best })
            .0
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMethod {
    /// Average of column-normalized matrix rows.
    #[default]
    Approx,
    /// Dominant eigenvector.
    Eigen,
}

impl std::str::FromStr for WeightMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "approx" => Ok(WeightMethod::Approx),
            "eigen" => Ok(WeightMethod::Eigen),
            other => Err(Error::Format(format!("unknown weight method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub acceptable: bool,
}

/// Both weight vectors plus the consistency metrics of one matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub w_approx: WeightVector,
    pub w_eigen: WeightVector,
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub acceptable: bool,
}

impl WeightReport {
    pub fn weights(&self, method: WeightMethod) -> &WeightVector {
        match method {
            WeightMethod::Approx => &self.w_approx,
            WeightMethod::Eigen => &self.w_eigen,
        }
    }
}

/// Divides every column by its sum, then averages each row.
pub fn approx_weights(matrix: &JudgmentMatrix) -> Result<WeightVector> {
    let h = matrix.h();
    let a = matrix.dense()?;
    let col_sums: Vec<f64> = (0..h).map(|j| (0..h).map(|r| a[r * h + j]).sum()).collect();
    let w = (0..h)
        .map(|i| (0..h).map(|j| a[i * h + j] / col_sums[j]).sum::<f64>() / h as f64)
        .collect();
    WeightVector::normalized(w)
}

/// Dominant eigenvector and eigenvalue by power iteration from the uniform
/// vector, normalizing by the sum at each step. The eigenvalue estimate is
/// the mean of `(A w)_i / w_i`.
pub fn eigen_weights(matrix: &JudgmentMatrix) -> Result<(WeightVector, f64)> {
    let h = matrix.h();
    let a = matrix.dense()?;
    let mut w = vec![1.0 / h as f64; h];
    let mut lambda = f64::NAN;
    for _ in 0..MAX_POWER_ITERATIONS {
        let aw: Vec<f64> = (0..h).map(|i| (0..h).map(|j| a[i * h + j] * w[j]).sum()).collect();
        let next_lambda = aw.iter().zip(&w).map(|(y, x)| y / x).sum::<f64>() / h as f64;
        let total: f64 = aw.iter().sum();
        let next_w: Vec<f64> = aw.iter().map(|y| y / total).collect();
        let w_delta = next_w.iter().zip(&w).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        let converged = (next_lambda - lambda).abs() <= POWER_TOLERANCE * next_lambda.abs() && w_delta <= POWER_TOLERANCE;
        w = next_w;
        lambda = next_lambda;
        if converged {
            return Ok((WeightVector(w), lambda));
        }
    }
    Err(Error::NoConvergence(MAX_POWER_ITERATIONS))
}

/// `CI = (lambda_max - h) / (h - 1)`; rounding noise below `h` is clamped to 0.
pub fn consistency_index(lambda_max: f64, h: usize) -> Result<f64> {
    if h < 3 {
        return Err(Error::BadDimension(format!("consistency index needs h >= 3, got {h}")));
    }
    Ok(((lambda_max - h as f64) / (h as f64 - 1.0)).max(0.0))
}

/// `RI = 1.98 (h - 2) / h`.
pub fn random_index(h: usize) -> Result<f64> {
    if h < 3 {
        return Err(Error::BadDimension(format!("random index needs h >= 3, got {h}")));
    }
    Ok(1.98 * (h as f64 - 2.0) / h as f64)
}

/// Eigen-based consistency report. A two-object matrix is always consistent:
/// its CI, RI and CR are reported as 0.
pub fn consistency_report(matrix: &JudgmentMatrix) -> Result<ConsistencyReport> {
    let (_, lambda_max) = eigen_weights(matrix)?;
    Ok(report_from_lambda(lambda_max, matrix.h()))
}

fn report_from_lambda(lambda_max: f64, h: usize) -> ConsistencyReport {
    if h < 3 {
        return ConsistencyReport { lambda_max, ci: 0.0, ri: 0.0, cr: 0.0, acceptable: true };
    }
    let ci = consistency_index(lambda_max, h).expect("h >= 3");
    let ri = random_index(h).expect("h >= 3");
    let cr = ci / ri;
    ConsistencyReport { lambda_max, ci, ri, cr, acceptable: cr <= CR_THRESHOLD }
}

/// Both weight routes and the consistency metrics in one pass.
pub fn weight_report(matrix: &JudgmentMatrix) -> Result<WeightReport> {
    let w_approx = approx_weights(matrix)?;
    let (w_eigen, lambda_max) = eigen_weights(matrix)?;
    let c = report_from_lambda(lambda_max, matrix.h());
    Ok(WeightReport { w_approx, w_eigen, lambda_max, ci: c.ci, ri: c.ri, cr: c.cr, acceptable: c.acceptable })
}
