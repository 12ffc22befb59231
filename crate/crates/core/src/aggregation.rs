//! Multi-expert accumulation: mean weights with per-coefficient Student t
//! confidence half-widths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{mean_and_sd, t_critical};
use crate::weights::WeightVector;

pub const DEFAULT_LEVEL: f64 = 0.95;
/// Largest expert count [`experts_needed`] will consider.
pub const MAX_EXPERTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyAggregate {
    pub k: usize,
    pub per_expert: Vec<WeightVector>,
    pub mean_w: WeightVector,
    /// `None` for a single expert: no variance estimate exists.
    pub half_width: Option<Vec<f64>>,
    pub level: f64,
    pub per_expert_cr: Vec<f64>,
}

impl StudyAggregate {
    pub fn has_variance(&self) -> bool {
        self.half_width.is_some()
    }

    /// Per-coefficient (min, max) across experts.
    pub fn ranges(&self) -> Vec<(f64, f64)> {
        (0..self.mean_w.len())
            .map(|c| {
                self.per_expert.iter().map(|w| w[c]).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
            })
            .collect()
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::BadLevel(level))
    }
}

/// Averages `k` expert weight vectors; half-widths are
/// `t(level, k-1) · s_i / √k`. Expert order does not affect the result.
pub fn aggregate(weights: &[WeightVector], crs: &[f64], level: f64) -> Result<StudyAggregate> {
    check_level(level)?;
    let first = weights.first().ok_or_else(|| Error::BadDimension("need at least one expert".into()))?;
    let h = first.len();
    if let Some(w) = weights.iter().find(|w| w.len() != h) {
        return Err(Error::DimensionMismatch { expected: h, found: w.len() });
    }
    if crs.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: weights.len(), found: crs.len() });
    }
    let k = weights.len();
    // sort each column so the floating-point sums do not depend on expert order
    let columns: Vec<Vec<f64>> = (0..h)
        .map(|c| {
            let mut col: Vec<f64> = weights.iter().map(|w| w[c]).collect();
            col.sort_by(f64::total_cmp);
            col
        })
        .collect();
    let stats: Vec<(f64, f64)> = columns.iter().map(|col| mean_and_sd(col)).collect();
    let mean_w = WeightVector::normalized(stats.iter().map(|&(m, _)| m).collect())?;
    let half_width = (k >= 2).then(|| {
        let t = t_critical(level, k - 1);
        stats.iter().map(|&(_, s)| t * s / (k as f64).sqrt()).collect()
    });
    Ok(StudyAggregate { k, per_expert: weights.to_vec(), mean_w, half_width, level, per_expert_cr: crs.to_vec() })
}

/// Smallest `k >= 2` whose t half-width for spread `observed_s` is within
/// `target_half_width`.
pub fn experts_needed(observed_s: f64, target_half_width: f64, level: f64) -> Result<usize> {
    check_level(level)?;
    if !(observed_s > 0.0 && target_half_width > 0.0) {
        return Err(Error::Format("spread and target half-width must be positive".into()));
    }
    (2..=MAX_EXPERTS)
        .find(|&k| t_critical(level, k - 1) * observed_s / (k as f64).sqrt() <= target_half_width)
        .ok_or(Error::Unreachable(MAX_EXPERTS))
}
