//! Distribution quantiles used by the baselines and the aggregation.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

/// Standard normal quantile `Φ⁻¹(p)` for `p` in (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Two-sided Student t critical value: the `(1 + level)/2` quantile with
/// `dof` degrees of freedom.
pub fn t_critical(level: f64, dof: usize) -> f64 {
    let t = StudentsT::new(0.0, 1.0, dof as f64).expect("dof >= 1");
    t.inverse_cdf(0.5 + level / 2.0)
}

/// Sample mean and standard deviation (denominator `n - 1`; 0 for `n < 2`).
pub fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    if xs.windows(2).all(|w| w[0] == w[1]) {
        return (xs.first().copied().unwrap_or(f64::NAN), 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
