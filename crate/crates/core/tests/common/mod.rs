//! Helpers shared by the session tests and the acceptance suite.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pairwise::session::{NextPair, Outcome, Session, SessionError, SessionState};
use pairwise::transitivity::{check_new_judgment, full_matrix_audit};
use pairwise::{ComparisonScale, Ratio};

/// Checks every session invariant; returns a description of the first
/// violation.
pub fn check_invariants(s: &Session) -> Result<(), String> {
    let m = s.matrix();
    let pairs = pairwise::pair_sequence(m.h()).unwrap();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let set = m.get(i, j);
        if k < s.cursor() {
            let v = set.ok_or_else(|| format!("committed pair ({i},{j}) is unset"))?;
            let triads = check_new_judgment(m, i, j, v).map_err(|e| e.to_string())?;
            if !triads.is_empty() {
                return Err(format!("committed pair ({i},{j}) conflicts: {}", triads[0]));
            }
        } else if set.is_some() {
            return Err(format!("pair ({i},{j}) beyond the cursor is set"));
        }
    }
    if (s.state() == SessionState::AwaitingRevision) != s.pending().is_some() {
        return Err(format!("state {:?} disagrees with pending {:?}", s.state(), s.pending().is_some()));
    }
    if (s.state() == SessionState::Complete) != (s.cursor() == s.total_pairs()) {
        return Err("completion flag disagrees with the cursor".into());
    }
    let replayed = s.replay().map_err(|e| e.to_string())?;
    if &replayed != m {
        return Err("event log does not replay to the matrix".into());
    }
    if s.state() == SessionState::Complete && !full_matrix_audit(m).map_err(|e| e.to_string())?.is_empty() {
        return Err("completed session fails the audit".into());
    }
    Ok(())
}

fn random_value(rng: &mut impl Rng, scale: ComparisonScale) -> Ratio {
    if rng.random_bool(0.05) {
        // off-scale on both families
        return Ratio::integer(rng.random_range(10..=12)).unwrap();
    }
    let values = scale.values();
    values[rng.random_range(0..values.len())]
}

/// Tallies over one fuzzed call sequence.
#[derive(Debug, Default, Clone, Copy)]
pub struct FuzzStats {
    pub calls: usize,
    pub commits: usize,
    pub conflicts: usize,
    pub errors: usize,
    pub completed: bool,
}

/// Drives a fresh session with `calls` random API calls (h in 3..=8) and
/// checks every invariant after each call. A judgment reported accepted
/// must have been clean under `check_new_judgment` beforehand.
pub fn fuzz_session(seed: u64, calls: usize) -> Result<FuzzStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = rng.random_range(3..=8);
    let scale = if rng.random_bool(0.5) { ComparisonScale::Saaty9 } else { ComparisonScale::default() };
    let labels = (1..=h).map(|k| format!("x{k}")).collect();
    let mut s = Session::new("fuzz", "study", "e", labels, scale).unwrap();
    let mut stats = FuzzStats::default();
    for _ in 0..calls {
        stats.calls += 1;
        let before = s.matrix().clone();
        let current = s.current_pair();
        let result = match rng.random_range(0..10) {
            0 => s.next_pair().map(|p| matches!(p, NextPair::Done)).map(|_| None),
            1..=5 => {
                let v = random_value(&mut rng, scale);
                let r = s.submit_judgment(v);
                if let (Ok(Outcome::Accepted { .. }), Some((i, j))) = (&r, current) {
                    if !check_new_judgment(&before, i, j, v.into()).unwrap().is_empty() {
                        return Err(format!("seed {seed}: accepted a rejected judgment at ({i},{j})"));
                    }
                }
                r.map(Some)
            }
            _ => {
                let pair = match s.pending() {
                    Some(p) if rng.random_bool(0.8) => p.candidates.0[rng.random_range(0..p.candidates.0.len())],
                    _ => {
                        let i = rng.random_range(0..h - 1);
                        (i, rng.random_range(i + 1..h))
                    }
                };
                // bias toward values that resolve the conflict so sessions progress
                let v = match s.pending() {
                    Some(p) if pair == p.pair && rng.random_bool(0.6) => {
                        let ok: Vec<Ratio> = scale.values().into_iter().filter(|v| p.admissible.contains(&v.relation())).collect();
                        ok[rng.random_range(0..ok.len())]
                    }
                    _ => random_value(&mut rng, scale),
                };
                s.submit_revision(pair, v).map(Some)
            }
        };
        match result {
            Ok(Some(Outcome::Accepted { .. })) => stats.commits += 1,
            Ok(Some(Outcome::Conflict(_))) => stats.conflicts += 1,
            Ok(None) => {}
            Err(SessionError::Core(e)) => return Err(format!("seed {seed}: core error {e}")),
            Err(_) => stats.errors += 1,
        }
        check_invariants(&s).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    stats.completed = s.state() == SessionState::Complete;
    Ok(stats)
}

/// Student t quantile by bisection on a Simpson-integrated density, kept
/// independent of the library's distribution code.
pub fn t_quantile_oracle(p: f64, nu: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let c = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (nu * std::f64::consts::PI).ln();
    let pdf = |x: f64| (c - (nu + 1.0) / 2.0 * (1.0 + x * x / nu).ln()).exp();
    let cdf = |x: f64| {
        let n = 4_000;
        let h = x / n as f64;
        let mut s = pdf(0.0) + pdf(x);
        for k in 1..n {
            s += pdf(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        0.5 + s * h / 3.0
    };
    let (mut lo, mut hi) = (0.0, 50.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
