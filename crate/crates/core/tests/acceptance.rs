//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Tolerances and seeds are pinned here.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pairwise::aggregation::aggregate;
use pairwise::simulation::{
    control_effect_experiment, scale_accuracy_experiment, sensitivity_experiment, AccuracyConfig, Condition, ControlConfig,
    SensitivityConfig, REFERENCE_CR_RANGE, REFERENCE_FLIP_EFFECT,
};
use pairwise::transitivity::{all_relation_triples, classify_triad};
use pairwise::weights::{random_index, weight_report};
use pairwise::{pair_sequence, ComparisonScale, JudgmentMatrix, Relation, WeightVector};

const SEED: u64 = 1;
const RECOVERY_TOL: f64 = 1e-9;
const AGG_TOL: f64 = 1e-3;
const FUZZ_SESSIONS: u64 = 10_000;
const FUZZ_CALLS: usize = 120;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Some rank assignment of (m, i, j) reproduces all three relations.
fn weak_order_exists(r_mj: Relation, r_ij: Relation, r_mi: Relation) -> bool {
    let rel = |a: u8, b: u8| match a.cmp(&b) {
        std::cmp::Ordering::Greater => Relation::More,
        std::cmp::Ordering::Less => Relation::Less,
        std::cmp::Ordering::Equal => Relation::Equal,
    };
    (0..27u8).any(|c| {
        let (m, i, j) = (c % 3, c / 3 % 3, c / 9);
        rel(m, j) == r_mj && rel(i, j) == r_ij && rel(m, i) == r_mi
    })
}

fn triad_census() -> Outcome {
    let mut conflicts = 0;
    let mut mismatches = 0;
    for (r_mj, r_ij, r_mi) in all_relation_triples() {
        let c = classify_triad(r_mj, r_ij, r_mi).is_conflict();
        conflicts += c as usize;
        mismatches += (c == weak_order_exists(r_mj, r_ij, r_mi)) as usize;
    }
    outcome(conflicts == 14 && mismatches == 0, format!("{conflicts}/27 conflicts, {mismatches} oracle mismatches"))
}

fn pair_count() -> Outcome {
    let bad: Vec<usize> = (2..=50).filter(|&h| pair_sequence(h).unwrap().len() != h * (h - 1) / 2).collect();
    let n28 = pair_sequence(28).unwrap().len();
    outcome(bad.is_empty() && n28 == 378, format!("h=2..50 mismatches {bad:?}, h=28 -> {n28}"))
}

fn consistent_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_w: f64 = 0.0;
    let mut worst_l: f64 = 0.0;
    let mut worst_cr: f64 = 0.0;
    for _ in 0..1000 {
        let h = rng.random_range(3..=12);
        let w: Vec<f64> = (0..h).map(|_| rng.random_range(0.01..100.0)).collect();
        let total: f64 = w.iter().sum();
        let r = weight_report(&JudgmentMatrix::from_weights(&w).unwrap()).unwrap();
        for (k, x) in w.iter().enumerate() {
            let t = x / total;
            worst_w = worst_w.max((r.w_approx[k] - t).abs()).max((r.w_eigen[k] - t).abs());
        }
        worst_l = worst_l.max((r.lambda_max - h as f64).abs());
        worst_cr = worst_cr.max(r.cr.abs());
    }
    outcome(
        worst_w <= RECOVERY_TOL && worst_l <= RECOVERY_TOL && worst_cr <= RECOVERY_TOL,
        format!("max |dw|={worst_w:.2e}, max |lambda-h|={worst_l:.2e}, max CR={worst_cr:.2e} (tol {RECOVERY_TOL:e})"),
    )
}

fn ri_formula() -> Outcome {
    let bad: Vec<usize> = (3..=64).filter(|&h| random_index(h).unwrap() != 1.98 * (h as f64 - 2.0) / h as f64).collect();
    let ri10 = random_index(10).unwrap();
    outcome(bad.is_empty() && (ri10 - 1.584).abs() < 1e-15, format!("h=3..64 mismatches {bad:?}, RI(10)={ri10}"))
}

fn scale_accuracy() -> Outcome {
    let cfg = AccuracyConfig {
        seed: SEED,
        scales: vec![ComparisonScale::Saaty9, ComparisonScale::ThreePoint { f: 3, g: 9 }],
        ..Default::default()
    };
    let r = scale_accuracy_experiment(&cfg).unwrap();
    let saaty = r.summary_for(ComparisonScale::Saaty9).unwrap();
    let three = r.summary_for(ComparisonScale::ThreePoint { f: 3, g: 9 }).unwrap();
    outcome(
        three.mean_mae_approx < saaty.mean_mae_approx,
        format!(
            "n=10 trials=100: mean MAE three:3,9 approx={:.5} eigen={:.5} vs saaty9 approx={:.5} eigen={:.5}",
            three.mean_mae_approx, three.mean_mae_eigen, saaty.mean_mae_approx, saaty.mean_mae_eigen
        ),
    )
}

fn control_effect() -> Outcome {
    let r = control_effect_experiment(&ControlConfig { seed: SEED, ..Default::default() }).unwrap();
    let audits: usize = r.rows_for(Condition::ControlOn).map(|row| row.audit_conflicts).sum();
    let crs: Vec<String> = r.rows_for(Condition::ControlOn).map(|row| format!("{:.4}", row.cr)).collect();
    let (lo, hi) = REFERENCE_CR_RANGE;
    outcome(
        r.on.mean_cr < r.off.mean_cr && audits == 0,
        format!(
            "mean CR on={:.4} off={:.4}, controlled audit conflicts={audits}, controlled CRs [{}] vs reference {lo}-{hi} ({}/3 inside)",
            r.on.mean_cr,
            r.off.mean_cr,
            crs.join(", "),
            r.controlled_in_reference()
        ),
    )
}

fn sensitivity() -> Outcome {
    let cfg = SensitivityConfig { seed: SEED, ..Default::default() };
    let a = sensitivity_experiment(&cfg).unwrap();
    let b = sensitivity_experiment(&cfg).unwrap();
    let deterministic = a.to_csv() == b.to_csv();
    let dominating = a.dominating_flips();
    let (rc, rw) = REFERENCE_FLIP_EFFECT;
    outcome(
        deterministic && dominating > 0,
        format!(
            "{} flips, deterministic={deterministic}, {dominating} with max rel dw > rel dCI, max ratio {:.2} (reference dCI {:.0}% vs dw {:.0}%)",
            a.rows.len(),
            a.max_ratio(),
            rc * 100.0,
            rw * 100.0
        ),
    )
}

fn session_fuzz() -> Outcome {
    let mut completed = 0;
    for seed in 0..FUZZ_SESSIONS {
        match common::fuzz_session(seed, FUZZ_CALLS) {
            Ok(s) => completed += s.completed as usize,
            Err(e) => return outcome(false, e),
        }
    }
    outcome(true, format!("{FUZZ_SESSIONS} sequences x {FUZZ_CALLS} calls, {completed} completed, invariants held"))
}

fn aggregation() -> Outcome {
    let ws: Vec<WeightVector> =
        [[0.6, 0.4], [0.5, 0.5], [0.7, 0.3]].iter().map(|w| WeightVector::normalized(w.to_vec()).unwrap()).collect();
    let agg = aggregate(&ws, &[0.0; 3], 0.95).unwrap();
    let hw = agg.half_width.as_ref().unwrap()[0];
    let oracle = common::t_quantile_oracle(0.975, 2.0) * 0.1 / 3f64.sqrt();
    outcome(
        (hw - oracle).abs() <= AGG_TOL && (hw - 0.2484).abs() <= AGG_TOL,
        format!("half_width={hw:.6}, oracle={oracle:.6}, expected 0.2484 (tol {AGG_TOL:e})"),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("triad census", triad_census),
        ("pair count", pair_count),
        ("consistent-matrix recovery", consistent_recovery),
        ("RI formula", ri_formula),
        ("scale accuracy (three-point vs 9-point)", scale_accuracy),
        ("control effect", control_effect),
        ("sensitivity report", sensitivity),
        ("session safety fuzz", session_fuzz),
        ("aggregation interval", aggregation),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        failed += !o.pass as usize;
        println!(
            "{} {name}: {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
