//! Simulated experts and the three experiments: scale accuracy, sensitivity
//! to a single reversed judgment, and the effect of real-time transitivity
//! control.
//!
//! Every trial (or expert) draws from its own ChaCha stream derived from the
//! master seed and its index, so reports are identical whether trials run
//! serially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregation::{aggregate, DEFAULT_LEVEL};
use crate::error::{Error, Result};
use crate::judgment::{JudgmentValue, Ratio};
use crate::matrix::{pair_sequence, JudgmentMatrix};
use crate::scale::ComparisonScale;
use crate::session::{Outcome, Session, SessionError};
use crate::transitivity::full_matrix_audit;
use crate::weights::{weight_report, WeightMethod, WeightReport};

/// Reference band for controlled sessions' CR.
pub const REFERENCE_CR_RANGE: (f64, f64) = (0.02, 0.05);
/// Reference single-flip effect: relative CI change vs. relative weight change.
pub const REFERENCE_FLIP_EFFECT: (f64, f64) = (0.07, 0.30);

const TRUTH_STREAM: u64 = u64::MAX;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Ground-truth weights: positive, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueWeights(Vec<f64>);

impl TrueWeights {
    /// Normalizes positive raw magnitudes.
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::BadDimension(format!("need at least 2 objects, got {}", raw.len())));
        }
        if raw.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::Format("true weights must be positive".into()));
        }
        let total: f64 = raw.iter().sum();
        Ok(TrueWeights(raw.iter().map(|x| x / total).collect()))
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

    /// `n` integers drawn from 1..=10, normalized. With `distinct` the draw
    /// is without replacement (needs `n <= 10`); otherwise with replacement,
    /// rejecting draws where every value is equal.
    pub fn random_integers(n: usize, distinct: bool, rng: &mut impl Rng) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDimension(format!("need at least 2 objects, got {n}")));
        }
        if distinct {
            if n > 10 {
                return Err(Error::BadDimension(format!("cannot draw {n} distinct integers from 1..=10")));
            }
            let picked = rand::seq::index::sample(rng, 10, n);
            let raw: Vec<f64> = picked.iter().map(|k| (k + 1) as f64).collect();
            return TrueWeights::from_raw(&raw);
        }
        loop {
            let raw: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(1..=10u32))).collect();
            if raw.iter().any(|&x| x != raw[0]) {
                return TrueWeights::from_raw(&raw);
            }
        }
    }
}

/// `k_i = i / (n(n+1)/2)` for `i = 1..=n`.
pub fn true_weights_linear(n: usize) -> Result<TrueWeights> {
    let raw: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    TrueWeights::from_raw(&raw)
}

/// The scale value nearest to `r` in log distance; ties go to the value
/// closer to 1.
pub fn quantize_ratio(r: f64, scale: ComparisonScale) -> Ratio {
    const TIE: f64 = 1e-12;
    let target = r.ln();
    let mut best = Ratio::ONE;
    let mut best_d = target.abs();
    for v in scale.values() {
        let lv = v.value().ln();
        let d = (target - lv).abs();
        if d < best_d - TIE || ((d - best_d).abs() <= TIE && lv.abs() < best.value().ln().abs()) {
            best = v;
            best_d = d;
        }
    }
    best
}

/// An expert who knows the true weights, answers with the quantized ratio,
/// and with probability `slip_prob` records a different scale value chosen
/// uniformly instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedExpert {
    pub truth: TrueWeights,
    pub scale: ComparisonScale,
    pub slip_prob: f64,
    pub seed: u64,
}

/// One pair of a simulated expert's run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response {
    pub pair: (usize, usize),
    pub intended: Ratio,
    pub recorded: Ratio,
}

impl Response {
    pub fn slipped(&self) -> bool {
        self.intended != self.recorded
    }
}

impl SimulatedExpert {
    pub fn intended(&self, i: usize, j: usize) -> Ratio {
        let w = self.truth.as_slice();
        quantize_ratio(w[i] / w[j], self.scale)
    }

    /// Responses in fill order.
    pub fn responses(&self) -> Vec<Response> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let values = self.scale.values();
        pair_sequence(self.truth.len())
            .expect("truth has at least 2 objects")
            .into_iter()
            .map(|(i, j)| {
                let intended = self.intended(i, j);
                let slip = rng.random::<f64>() < self.slip_prob;
                let recorded = if slip {
                    let others: Vec<Ratio> = values.iter().copied().filter(|&v| v != intended).collect();
                    others[rng.random_range(0..others.len())]
                } else {
                    intended
                };
                Response { pair: (i, j), intended, recorded }
            })
            .collect()
    }

    /// The complete matrix of recorded responses, unchecked.
    pub fn generate_matrix(&self) -> JudgmentMatrix {
        let mut m = JudgmentMatrix::with_size(self.truth.len()).expect("truth has at least 2 objects");
        for r in self.responses() {
            m.set(r.pair.0, r.pair.1, r.recorded.into()).expect("valid pair");
        }
        m
    }
}

fn mae(w: &[f64], truth: &[f64]) -> f64 {
    w.iter().zip(truth).map(|(a, b)| (a - b).abs()).sum::<f64>() / w.len() as f64
}

fn max_rel_err(w: &[f64], truth: &[f64]) -> f64 {
    w.iter().zip(truth).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header).expect("in-memory write");
    for row in rows {
        wtr.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8")
}

// ---------------------------------------------------------------------------
// scale accuracy

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyConfig {
    pub n: usize,
    pub trials: usize,
    pub scales: Vec<ComparisonScale>,
    pub seed: u64,
    pub distinct: bool,
}

/// Three-point parameter pairs swept by default, besides the 9-point scale.
pub fn default_accuracy_scales() -> Vec<ComparisonScale> {
    let mut scales = vec![ComparisonScale::Saaty9];
    scales.extend([(2, 4), (2, 5), (3, 9), (2, 9)].map(|(f, g)| ComparisonScale::ThreePoint { f, g }));
    scales
}

impl Default for AccuracyConfig {
    fn default() -> Self {
        AccuracyConfig { n: 10, trials: 100, scales: default_accuracy_scales(), seed: 1, distinct: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub trial: usize,
    pub scale: String,
    pub mae_approx: f64,
    pub mae_eigen: f64,
    pub max_rel_approx: f64,
    pub max_rel_eigen: f64,
    pub cr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleSummary {
    pub scale: ComparisonScale,
    pub mean_mae_approx: f64,
    pub mean_mae_eigen: f64,
    pub mean_max_rel_approx: f64,
    pub mean_max_rel_eigen: f64,
    pub mean_cr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<AccuracyRow>,
    pub per_scale: Vec<ScaleSummary>,
}

impl AccuracyReport {
    pub fn summary_for(&self, scale: ComparisonScale) -> Option<&ScaleSummary> {
        self.per_scale.iter().find(|s| s.scale == scale)
    }

    pub fn to_csv(&self) -> String {
        csv_string(
            &["trial", "scale", "mae_approx", "mae_eigen", "max_rel_approx", "max_rel_eigen", "cr"],
            self.rows.iter().map(|r| {
                vec![
                    r.trial.to_string(),
                    r.scale.clone(),
                    r.mae_approx.to_string(),
                    r.mae_eigen.to_string(),
                    r.max_rel_approx.to_string(),
                    r.max_rel_eigen.to_string(),
                    r.cr.to_string(),
                ]
            }),
        )
    }

    pub fn summary(&self) -> String {
        let mut out = format!("scale accuracy: n={} trials={} seed={}\n", self.n, self.trials, self.seed);
        for s in &self.per_scale {
            out.push_str(&format!(
                "  {:<12} mean MAE approx={:.6} eigen={:.6}  mean max rel err approx={:.4}  mean CR={:.4}\n",
                s.scale.to_string(),
                s.mean_mae_approx,
                s.mean_mae_eigen,
                s.mean_max_rel_approx,
                s.mean_cr
            ));
        }
        out
    }
}

/// Slip-free accuracy of each scale against random integer truths.
pub fn scale_accuracy_experiment(cfg: &AccuracyConfig) -> Result<AccuracyReport> {
    if cfg.trials == 0 {
        return Err(Error::BadDimension("need at least one trial".into()));
    }
    let per_trial: Vec<Vec<AccuracyRow>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(cfg.seed, t as u64);
            let truth = TrueWeights::random_integers(cfg.n, cfg.distinct, &mut rng)?;
            cfg.scales.iter().map(|&scale| accuracy_row(t, &truth, scale)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<AccuracyRow> = per_trial.into_iter().flatten().collect();
    let per_scale = cfg
        .scales
        .iter()
        .map(|&scale| {
            let name = scale.to_string();
            let mine: Vec<&AccuracyRow> = rows.iter().filter(|r| r.scale == name).collect();
            let mean = |f: fn(&AccuracyRow) -> f64| mine.iter().map(|r| f(r)).sum::<f64>() / mine.len() as f64;
            ScaleSummary {
                scale,
                mean_mae_approx: mean(|r| r.mae_approx),
                mean_mae_eigen: mean(|r| r.mae_eigen),
                mean_max_rel_approx: mean(|r| r.max_rel_approx),
                mean_max_rel_eigen: mean(|r| r.max_rel_eigen),
                mean_cr: mean(|r| r.cr),
            }
        })
        .collect();
    Ok(AccuracyReport { n: cfg.n, trials: cfg.trials, seed: cfg.seed, rows, per_scale })
}

/// Accuracy of one slip-free matrix for `truth` on `scale`.
pub fn accuracy_row(trial: usize, truth: &TrueWeights, scale: ComparisonScale) -> Result<AccuracyRow> {
    let expert = SimulatedExpert { truth: truth.clone(), scale, slip_prob: 0.0, seed: 0 };
    let report = weight_report(&expert.generate_matrix())?;
    let k = truth.as_slice();
    Ok(AccuracyRow {
        trial,
        scale: scale.to_string(),
        mae_approx: mae(report.w_approx.as_slice(), k),
        mae_eigen: mae(report.w_eigen.as_slice(), k),
        max_rel_approx: max_rel_err(report.w_approx.as_slice(), k),
        max_rel_eigen: max_rel_err(report.w_eigen.as_slice(), k),
        cr: report.cr,
    })
}

// ---------------------------------------------------------------------------
// sensitivity

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityConfig {
    pub h: usize,
    pub trials: usize,
    pub scale: ComparisonScale,
    pub seed: u64,
}

impl Default for SensitivityConfig {
    fn default() -> Self {
        SensitivityConfig { h: 25, trials: 20, scale: ComparisonScale::default(), seed: 1 }
    }
}

/// Effect of replacing one judgment with its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlipEffect {
    pub pair: (usize, usize),
    pub ci_before: f64,
    pub ci_after: f64,
    /// `(CI' - CI) / CI`; infinite when the matrix was consistent.
    pub rel_dci: f64,
    /// `max_i |w'_i - w_i| / w_i` for column-normalization weights.
    pub max_rel_dw_approx: f64,
    pub max_rel_dw_eigen: f64,
}

impl FlipEffect {
    /// The weight change exceeds the CI change.
    pub fn weight_dominates(&self) -> bool {
        self.max_rel_dw_approx > self.rel_dci.abs()
    }
}

fn max_rel_change(after: &[f64], before: &[f64]) -> f64 {
    max_rel_err(after, before)
}

/// Flips every upper-triangle judgment of a complete matrix in turn.
pub fn flip_sensitivity(matrix: &JudgmentMatrix) -> Result<Vec<FlipEffect>> {
    let base = weight_report(matrix)?;
    pair_sequence(matrix.h())?
        .into_iter()
        .map(|(i, j)| {
            let mut flipped = matrix.clone();
            let v = matrix.get(i, j).expect("complete matrix");
            flipped.set(i, j, v.recip())?;
            let after = weight_report(&flipped)?;
            Ok(flip_effect((i, j), &base, &after))
        })
        .collect()
}

fn flip_effect(pair: (usize, usize), base: &WeightReport, after: &WeightReport) -> FlipEffect {
    let rel_dci = if base.ci > 0.0 {
        (after.ci - base.ci) / base.ci
    } else if after.ci > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    FlipEffect {
        pair,
        ci_before: base.ci,
        ci_after: after.ci,
        rel_dci,
        max_rel_dw_approx: max_rel_change(after.w_approx.as_slice(), base.w_approx.as_slice()),
        max_rel_dw_eigen: max_rel_change(after.w_eigen.as_slice(), base.w_eigen.as_slice()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub trial: usize,
    #[serde(flatten)]
    pub effect: FlipEffect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub h: usize,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<SensitivityRow>,
}

impl SensitivityReport {
    pub fn dominating_flips(&self) -> usize {
        self.rows.iter().filter(|r| r.effect.weight_dominates()).count()
    }

    /// Largest `max Δw / ΔCI` over flips with a finite positive CI change.
    pub fn max_ratio(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.effect.rel_dci.is_finite() && r.effect.rel_dci > 0.0)
            .map(|r| r.effect.max_rel_dw_approx / r.effect.rel_dci)
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        csv_string(
            &["trial", "i", "j", "ci_before", "ci_after", "rel_dci", "max_rel_dw_approx", "max_rel_dw_eigen"],
            self.rows.iter().map(|r| {
                let e = &r.effect;
                vec![
                    r.trial.to_string(),
                    (e.pair.0 + 1).to_string(),
                    (e.pair.1 + 1).to_string(),
                    e.ci_before.to_string(),
                    e.ci_after.to_string(),
                    e.rel_dci.to_string(),
                    e.max_rel_dw_approx.to_string(),
                    e.max_rel_dw_eigen.to_string(),
                ]
            }),
        )
    }

    pub fn summary(&self) -> String {
        let (rc, rw) = REFERENCE_FLIP_EFFECT;
        format!(
            "sensitivity: h={} trials={} seed={} flips={}\n  flips where max weight change exceeds CI change: {}\n  largest (max rel dw)/(rel dCI): {:.3}\n  reference single flip: dCI {:.0}% vs dw {:.0}%\n",
            self.h,
            self.trials,
            self.seed,
            self.rows.len(),
            self.dominating_flips(),
            self.max_ratio(),
            rc * 100.0,
            rw * 100.0
        )
    }
}

/// Per trial: a slip-free matrix from random integer truths, then every
/// single reversed judgment.
pub fn sensitivity_experiment(cfg: &SensitivityConfig) -> Result<SensitivityReport> {
    if !(3..=64).contains(&cfg.h) {
        return Err(Error::BadDimension(format!("sensitivity needs 3 <= h <= 64, got {}", cfg.h)));
    }
    let rows: Vec<Vec<SensitivityRow>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(cfg.seed, t as u64);
            let truth = TrueWeights::random_integers(cfg.h, false, &mut rng)?;
            let expert = SimulatedExpert { truth, scale: cfg.scale, slip_prob: 0.0, seed: 0 };
            let effects = flip_sensitivity(&expert.generate_matrix())?;
            Ok(effects.into_iter().map(|effect| SensitivityRow { trial: t, effect }).collect())
        })
        .collect::<Result<_>>()?;
    Ok(SensitivityReport { h: cfg.h, trials: cfg.trials, seed: cfg.seed, rows: rows.into_iter().flatten().collect() })
}

// ---------------------------------------------------------------------------
// control effect

#[derive(Debug, Clone, PartialEq)]
pub struct ControlConfig {
    pub h: usize,
    pub experts: usize,
    pub slip_prob: f64,
    pub scale: ComparisonScale,
    pub seed: u64,
    pub level: f64,
    /// Shared truth; drawn from integers 1..=10 when absent.
    pub truth: Option<TrueWeights>,
}

impl Default for ControlConfig {
    fn default() -> Self {
        ControlConfig {
            h: 28,
            experts: 3,
            slip_prob: 0.1,
            scale: ComparisonScale::default(),
            seed: 1,
            level: DEFAULT_LEVEL,
            truth: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ControlOff,
    ControlOn,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::ControlOff => "off",
            Condition::ControlOn => "on",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlRow {
    pub condition: Condition,
    pub expert: usize,
    pub slips: usize,
    pub rejections: usize,
    pub revisions: usize,
    pub lambda_max: f64,
    pub ci: f64,
    pub cr: f64,
    pub audit_conflicts: usize,
    pub mae_approx: f64,
    #[serde(skip)]
    pub report: WeightReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionSummary {
    pub condition: Condition,
    pub mean_cr: f64,
    pub mean_half_width_approx: f64,
    pub mean_half_width_eigen: f64,
    pub max_half_width_approx: f64,
    pub mean_mae_approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlReport {
    pub h: usize,
    pub experts: usize,
    pub slip_prob: f64,
    pub seed: u64,
    pub truth: TrueWeights,
    pub rows: Vec<ControlRow>,
    pub off: ConditionSummary,
    pub on: ConditionSummary,
}

impl ControlReport {
    pub fn rows_for(&self, condition: Condition) -> impl Iterator<Item = &ControlRow> {
        self.rows.iter().filter(move |r| r.condition == condition)
    }

    /// Controlled sessions whose CR falls inside the reference band.
    pub fn controlled_in_reference(&self) -> usize {
        let (lo, hi) = REFERENCE_CR_RANGE;
        self.rows_for(Condition::ControlOn).filter(|r| r.cr >= lo && r.cr <= hi).count()
    }

    pub fn to_csv(&self) -> String {
        csv_string(
            &["condition", "expert", "slips", "rejections", "revisions", "lambda_max", "ci", "cr", "audit_conflicts", "mae_approx"],
            self.rows.iter().map(|r| {
                vec![
                    r.condition.as_str().to_string(),
                    r.expert.to_string(),
                    r.slips.to_string(),
                    r.rejections.to_string(),
                    r.revisions.to_string(),
                    r.lambda_max.to_string(),
                    r.ci.to_string(),
                    r.cr.to_string(),
                    r.audit_conflicts.to_string(),
                    r.mae_approx.to_string(),
                ]
            }),
        )
    }

    pub fn summary(&self) -> String {
        let (lo, hi) = REFERENCE_CR_RANGE;
        let mut out = format!(
            "control effect: h={} experts={} slip_prob={} seed={}\n",
            self.h, self.experts, self.slip_prob, self.seed
        );
        for s in [&self.off, &self.on] {
            out.push_str(&format!(
                "  control {:<3}  mean CR={:.4}  mean half-width approx={:.5} eigen={:.5}  max half-width={:.5}  mean MAE={:.5}\n",
                s.condition.as_str(),
                s.mean_cr,
                s.mean_half_width_approx,
                s.mean_half_width_eigen,
                s.max_half_width_approx,
                s.mean_mae_approx
            ));
        }
        let crs: Vec<String> = self.rows_for(Condition::ControlOn).map(|r| format!("{:.4}", r.cr)).collect();
        out.push_str(&format!(
            "  controlled CR values [{}]; reference band {lo}..{hi}: {}/{} inside\n",
            crs.join(", "),
            self.controlled_in_reference(),
            self.experts
        ));
        out
    }
}

/// Result of driving one simulated expert through a checked session.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledRun {
    pub matrix: JudgmentMatrix,
    pub rejections: usize,
    pub revisions: usize,
}

fn nearest_admissible(target: Ratio, scale: ComparisonScale, admissible: &[crate::judgment::Relation]) -> Ratio {
    let t = target.value().ln();
    scale
        .values()
        .into_iter()
        .filter(|v| admissible.contains(&v.relation()))
        .min_by(|a, b| {
            let da = (a.value().ln() - t).abs();
            let db = (b.value().ln() - t).abs();
            da.total_cmp(&db).then(a.value().ln().abs().total_cmp(&b.value().ln().abs()))
        })
        .expect("admissible set is never empty")
}

/// Feeds the expert's recorded responses through a session with real-time
/// control. On a conflict the expert first resubmits the intended value
/// of the current pair; in the second row it then revises the earlier pairs
/// (M-J, then I-M) to their intended values; as a last resort it picks the
/// admissible scale value nearest the intended one.
pub fn run_controlled(expert: &SimulatedExpert) -> std::result::Result<ControlledRun, SessionError> {
    let labels = crate::matrix::default_labels(expert.truth.len());
    let mut session = Session::new("sim", "sim", "sim", labels, expert.scale)?;
    let responses = expert.responses();
    let intended_of = |pair: (usize, usize)| expert.intended(pair.0, pair.1);
    let mut rejections = 0;
    let mut revisions = 0;
    for resp in &responses {
        let mut outcome = session.submit_judgment(resp.recorded)?;
        let mut attempts = 0;
        while let Outcome::Conflict(report) = outcome {
            rejections += 1;
            attempts += 1;
            let current = report.pair;
            let candidates = report.candidates.0.clone();
            outcome = if attempts == 1 {
                revisions += 1;
                session.submit_revision(current, intended_of(current))?
            } else if attempts - 1 < candidates.len() && candidates[attempts - 1] != current {
                let pair = candidates[attempts - 1];
                revisions += 1;
                session.submit_revision(pair, intended_of(pair))?
            } else {
                let pending = session.pending().expect("conflict leaves a pending value");
                let v = nearest_admissible(intended_of(current), expert.scale, &pending.admissible);
                revisions += 1;
                let out = session.submit_revision(current, v)?;
                debug_assert!(out.is_accepted(), "admissible value must be accepted");
                out
            };
        }
    }
    Ok(ControlledRun { matrix: session.matrix().clone(), rejections, revisions })
}

fn condition_summary(condition: Condition, rows: &[ControlRow], level: f64) -> Result<ConditionSummary> {
    let mine: Vec<&ControlRow> = rows.iter().filter(|r| r.condition == condition).collect();
    let crs: Vec<f64> = mine.iter().map(|r| r.cr).collect();
    let half = |method: WeightMethod| -> Result<(f64, f64)> {
        let ws: Vec<_> = mine.iter().map(|r| r.report.weights(method).clone()).collect();
        let agg = aggregate(&ws, &crs, level)?;
        Ok(match agg.half_width {
            Some(hw) => (hw.iter().sum::<f64>() / hw.len() as f64, hw.iter().copied().fold(0.0, f64::max)),
            None => (0.0, 0.0),
        })
    };
    let (mean_hw_a, max_hw_a) = half(WeightMethod::Approx)?;
    let (mean_hw_e, _) = half(WeightMethod::Eigen)?;
    Ok(ConditionSummary {
        condition,
        mean_cr: crs.iter().sum::<f64>() / crs.len() as f64,
        mean_half_width_approx: mean_hw_a,
        mean_half_width_eigen: mean_hw_e,
        max_half_width_approx: max_hw_a,
        mean_mae_approx: mine.iter().map(|r| r.mae_approx).sum::<f64>() / mine.len() as f64,
    })
}

/// Each expert answers once with slips recorded as-is and once through a
/// controlled session; the two conditions see identical slips.
pub fn control_effect_experiment(cfg: &ControlConfig) -> Result<ControlReport> {
    if cfg.h < 3 || cfg.experts == 0 {
        return Err(Error::BadDimension(format!("need h >= 3 and at least one expert, got h={} experts={}", cfg.h, cfg.experts)));
    }
    if !(0.0..1.0).contains(&cfg.slip_prob) {
        return Err(Error::Format(format!("slip probability {} must lie in [0, 1)", cfg.slip_prob)));
    }
    let truth = match &cfg.truth {
        Some(t) if t.len() != cfg.h => return Err(Error::DimensionMismatch { expected: cfg.h, found: t.len() }),
        Some(t) => t.clone(),
        None => TrueWeights::random_integers(cfg.h, false, &mut rng_for(cfg.seed, TRUTH_STREAM))?,
    };
    let per_expert: Vec<[ControlRow; 2]> = (0..cfg.experts)
        .into_par_iter()
        .map(|e| {
            let seed = rng_for(cfg.seed, e as u64).random::<u64>();
            let expert = SimulatedExpert { truth: truth.clone(), scale: cfg.scale, slip_prob: cfg.slip_prob, seed };
            let slips = expert.responses().iter().filter(|r| r.slipped()).count();
            let off = expert.generate_matrix();
            let on = run_controlled(&expert).map_err(|err| Error::Format(err.to_string()))?;
            let row = |condition, m: &JudgmentMatrix, rejections, revisions| -> Result<ControlRow> {
                let report = weight_report(m)?;
                Ok(ControlRow {
                    condition,
                    expert: e,
                    slips,
                    rejections,
                    revisions,
                    lambda_max: report.lambda_max,
                    ci: report.ci,
                    cr: report.cr,
                    audit_conflicts: full_matrix_audit(m)?.len(),
                    mae_approx: mae(report.w_approx.as_slice(), truth.as_slice()),
                    report,
                })
            };
            Ok([row(Condition::ControlOff, &off, 0, 0)?, row(Condition::ControlOn, &on.matrix, on.rejections, on.revisions)?])
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ControlRow> = per_expert.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.condition == Condition::ControlOn, r.expert));
    Ok(ControlReport {
        h: cfg.h,
        experts: cfg.experts,
        slip_prob: cfg.slip_prob,
        seed: cfg.seed,
        off: condition_summary(Condition::ControlOff, &rows, cfg.level)?,
        on: condition_summary(Condition::ControlOn, &rows, cfg.level)?,
        truth,
        rows,
    })
}

/// Convenience: matrix of exact scale values from `(i, j, value)` triples.
pub fn matrix_from_ratios(h: usize, entries: &[(usize, usize, Ratio)]) -> Result<JudgmentMatrix> {
    let mut m = JudgmentMatrix::with_size(h)?;
    for &(i, j, v) in entries {
        m.set(i, j, JudgmentValue::Exact(v))?;
    }
    Ok(m)
}
