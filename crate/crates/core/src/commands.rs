//! Operations behind the `pairwise` command line. Each returns the text it
//! would print so it can be tested without a process boundary.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::Serialize;
use serde_json::json;

use crate::aggregation::{aggregate, StudyAggregate};
use crate::baselines::{c_frequencies, preference_intensities, thurstone_scale, BinaryComparisonMatrix, ThurstoneOptions};
use crate::matrix::JudgmentMatrix;
use crate::scale::ComparisonScale;
use crate::session::{Session, SessionState};
use crate::simulation::{
    control_effect_experiment, default_accuracy_scales, scale_accuracy_experiment, sensitivity_experiment, AccuracyConfig,
    ControlConfig, SensitivityConfig,
};
use crate::store::{load_sessions_in, Study};
use crate::transitivity::full_matrix_audit;
use crate::weights::{weight_report, WeightMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (json|csv)")),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"
}

fn csv_of(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// `weights <matrix.json>`
pub fn weights(path: &Path, method: WeightMethod, format: OutputFormat) -> anyhow::Result<String> {
    let (m, _) = JudgmentMatrix::load(path).with_context(|| format!("loading {}", path.display()))?;
    let r = weight_report(&m)?;
    let w = r.weights(method);
    Ok(match format {
        OutputFormat::Json => to_json(&json!({
            "method": match method { WeightMethod::Approx => "approx", WeightMethod::Eigen => "eigen" },
            "labels": m.labels(),
            "w": w,
            "lambda_max": r.lambda_max,
            "ci": r.ci,
            "ri": r.ri,
            "cr": r.cr,
            "acceptable": r.acceptable,
        })),
        OutputFormat::Csv => csv_of(
            &["object", "label", "w", "lambda_max", "ci", "ri", "cr"],
            m.labels().iter().enumerate().map(|(k, label)| {
                vec![
                    (k + 1).to_string(),
                    label.clone(),
                    w[k].to_string(),
                    r.lambda_max.to_string(),
                    r.ci.to_string(),
                    r.ri.to_string(),
                    r.cr.to_string(),
                ]
            }),
        )?,
    })
}

/// `audit <matrix.json>`: one line per conflicting triad, empty when the
/// matrix is ordinally transitive.
pub fn audit(path: &Path) -> anyhow::Result<(String, usize)> {
    let (m, _) = JudgmentMatrix::load(path).with_context(|| format!("loading {}", path.display()))?;
    let triads = full_matrix_audit(&m)?;
    let text: String = triads.iter().map(|t| format!("{t}\n")).collect();
    Ok((text, triads.len()))
}

/// `baseline c-freq <binary.json>`
pub fn baseline_c_freq(path: &Path) -> anyhow::Result<String> {
    let b = BinaryComparisonMatrix::load(path).with_context(|| format!("loading {}", path.display()))?;
    let r = c_frequencies(&b)?;
    let ranking: Vec<usize> = r.ranking.iter().map(|k| k + 1).collect();
    Ok(to_json(&json!({ "labels": b.labels(), "c": r.c, "ranking": ranking })))
}

/// `baseline thurstone <binary1.json> ...`
pub fn baseline_thurstone(paths: &[PathBuf], clamp: bool) -> anyhow::Result<String> {
    if paths.is_empty() {
        bail!("need at least one binary matrix");
    }
    let ms = paths
        .iter()
        .map(|p| BinaryComparisonMatrix::load(p).with_context(|| format!("loading {}", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let p = preference_intensities(&ms)?;
    let s = thurstone_scale(&p, ThurstoneOptions { clamp })?;
    let mut ranking: Vec<usize> = (0..s.len()).collect();
    ranking.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let ranking: Vec<usize> = ranking.into_iter().map(|k| k + 1).collect();
    Ok(to_json(&json!({ "labels": ms[0].labels(), "k": p.k, "scale": s, "ranking": ranking })))
}

/// Aggregate of the completed sessions stored in a study directory, with
/// the study's labels.
pub fn load_study_aggregate(dir: &Path, level: f64, method: WeightMethod) -> anyhow::Result<(Vec<String>, StudyAggregate)> {
    let records = load_sessions_in(dir).with_context(|| format!("reading sessions under {}", dir.display()))?;
    let mut labels: Option<Vec<String>> = std::fs::read(dir.join("study.json"))
        .ok()
        .map(|b| serde_json::from_slice::<Study>(&b))
        .transpose()
        .context("parsing study.json")?
        .map(|s| s.labels);
    let mut ws = Vec::new();
    let mut crs = Vec::new();
    for record in records {
        let id = record.id.clone();
        let session = Session::from_record(record).with_context(|| format!("session {id}"))?;
        if session.state() != SessionState::Complete {
            continue;
        }
        labels.get_or_insert_with(|| session.matrix().labels().to_vec());
        let r = session.results()?;
        ws.push(r.weights(method).clone());
        crs.push(r.cr);
    }
    if ws.is_empty() {
        bail!("no completed sessions under {}", dir.display());
    }
    Ok((labels.unwrap_or_default(), aggregate(&ws, &crs, level)?))
}

/// `aggregate <study-dir>`
pub fn aggregate_study(dir: &Path, level: f64, method: WeightMethod, format: OutputFormat) -> anyhow::Result<String> {
    let (labels, agg) = load_study_aggregate(dir, level, method)?;
    let ranges = agg.ranges();
    Ok(match format {
        OutputFormat::Csv => csv_of(
            &["object", "label", "mean_w", "half_width", "min", "max"],
            (0..agg.mean_w.len()).map(|k| {
                vec![
                    (k + 1).to_string(),
                    labels.get(k).cloned().unwrap_or_default(),
                    agg.mean_w[k].to_string(),
                    agg.half_width.as_ref().map(|h| h[k].to_string()).unwrap_or_default(),
                    ranges[k].0.to_string(),
                    ranges[k].1.to_string(),
                ]
            }),
        )?,
        OutputFormat::Json => to_json(&json!({
            "k": agg.k,
            "level": agg.level,
            "labels": labels,
            "mean_w": agg.mean_w,
            "half_width": agg.half_width,
            "per_expert_cr": agg.per_expert_cr,
        })),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Accuracy,
    Sensitivity,
    Control,
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig1" | "accuracy" => Ok(Experiment::Accuracy),
            "sensitivity" => Ok(Experiment::Sensitivity),
            "control" => Ok(Experiment::Control),
            other => Err(format!("unknown experiment {other:?} (fig1|sensitivity|control)")),
        }
    }
}

/// Overrides for the experiment defaults; `None` keeps the default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimulateOptions {
    pub seed: u64,
    pub scales: Vec<ComparisonScale>,
    pub distinct: bool,
    pub trials: Option<usize>,
    pub h: Option<usize>,
    pub experts: Option<usize>,
    pub slip_prob: Option<f64>,
}

/// Runs an experiment; returns (csv, summary).
pub fn simulate(which: Experiment, opts: &SimulateOptions) -> anyhow::Result<(String, String)> {
    let first_scale = opts.scales.first().copied().unwrap_or_default();
    Ok(match which {
        Experiment::Accuracy => {
            let mut cfg = AccuracyConfig {
                seed: opts.seed,
                distinct: opts.distinct,
                scales: if opts.scales.is_empty() { default_accuracy_scales() } else { opts.scales.clone() },
                ..Default::default()
            };
            cfg.n = opts.h.unwrap_or(cfg.n);
            cfg.trials = opts.trials.unwrap_or(cfg.trials);
            let r = scale_accuracy_experiment(&cfg)?;
            (r.to_csv(), r.summary())
        }
        Experiment::Sensitivity => {
            let mut cfg = SensitivityConfig { seed: opts.seed, scale: first_scale, ..Default::default() };
            cfg.h = opts.h.unwrap_or(cfg.h);
            cfg.trials = opts.trials.unwrap_or(cfg.trials);
            let r = sensitivity_experiment(&cfg)?;
            (r.to_csv(), r.summary())
        }
        Experiment::Control => {
            let mut cfg = ControlConfig { seed: opts.seed, scale: first_scale, ..Default::default() };
            cfg.h = opts.h.unwrap_or(cfg.h);
            cfg.experts = opts.experts.unwrap_or(cfg.experts);
            cfg.slip_prob = opts.slip_prob.unwrap_or(cfg.slip_prob);
            let r = control_effect_experiment(&cfg)?;
            (r.to_csv(), r.summary())
        }
    })
}
