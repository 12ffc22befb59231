use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use pairwise::aggregation::{aggregate, experts_needed};
use pairwise::stats::{normal_quantile, t_critical};
use pairwise::WeightVector;

fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn t_pdf(x: f64, nu: f64) -> f64 {
    let c = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (nu * std::f64::consts::PI).ln();
    (c - (nu + 1.0) / 2.0 * (1.0 + x * x / nu).ln()).exp()
}

/// P(T <= x) for x >= 0 by composite Simpson on [0, x].
fn t_cdf(x: f64, nu: f64) -> f64 {
    let n = 4_000;
    let h = x / n as f64;
    let mut s = t_pdf(0.0, nu) + t_pdf(x, nu);
    for k in 1..n {
        s += t_pdf(k as f64 * h, nu) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 + s * h / 3.0
}

#[test]
fn normal_quantile_against_erfc_bisection() {
    for k in 1..200 {
        let p = k as f64 / 200.0;
        let want = bisect(normal_cdf, p, -10.0, 10.0);
        assert_abs_diff_eq!(normal_quantile(p), want, epsilon = 1e-9);
    }
    for p in [1e-6, 1e-3, 0.841, 0.999, 1.0 - 1e-6] {
        assert_abs_diff_eq!(normal_quantile(p), bisect(normal_cdf, p, -10.0, 10.0), epsilon = 1e-9);
    }
}

#[test]
fn t_critical_against_closed_forms_and_integration() {
    for level in [0.8, 0.9, 0.95, 0.99] {
        let p: f64 = 0.5 + level / 2.0;
        // nu = 1 is Cauchy, nu = 2 has an algebraic inverse
        assert_abs_diff_eq!(t_critical(level, 1), (std::f64::consts::PI * (p - 0.5)).tan(), epsilon = 1e-8);
        let alpha = 4.0 * p * (1.0 - p);
        assert_abs_diff_eq!(t_critical(level, 2), 2.0 * (p - 0.5) * (2.0 / alpha).sqrt(), epsilon = 1e-9);
        for dof in [3usize, 5, 9, 29] {
            let want = bisect(|x| t_cdf(x, dof as f64), p, 0.0, 50.0);
            assert_abs_diff_eq!(t_critical(level, dof), want, epsilon = 1e-8);
        }
    }
}

fn wv(x: &[f64]) -> WeightVector {
    WeightVector::normalized(x.to_vec()).unwrap()
}

#[test]
fn three_expert_interval_example() {
    let ws = [wv(&[0.6, 0.4]), wv(&[0.5, 0.5]), wv(&[0.7, 0.3])];
    let agg = aggregate(&ws, &[0.0; 3], 0.95).unwrap();
    let t = bisect(|x| t_cdf(x, 2.0), 0.975, 0.0, 50.0);
    let hw = agg.half_width.unwrap();
    assert_abs_diff_eq!(hw[0], t * 0.1 / 3f64.sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(hw[0], 0.2484, epsilon = 1e-3);
}

#[test]
fn coverage_matches_level() {
    // first weight ~ N(0.5, 0.05), second is the complement
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let reps = 4000;
    let mut covered = 0;
    for _ in 0..reps {
        let ws: Vec<WeightVector> = (0..5)
            .map(|_| {
                let z = normal_quantile(rng.random_range(1e-12..1.0));
                let a = 0.5 + 0.05 * z;
                wv(&[a, 1.0 - a])
            })
            .collect();
        let agg = aggregate(&ws, &[0.0; 5], 0.95).unwrap();
        let hw = agg.half_width.unwrap()[0];
        if (agg.mean_w[0] - 0.5).abs() <= hw {
            covered += 1;
        }
    }
    let rate = covered as f64 / reps as f64;
    assert!((rate - 0.95).abs() < 0.015, "coverage {rate}");
}

#[test]
fn experts_needed_is_minimal() {
    for (s, target) in [(0.1, 0.25), (0.05, 0.03), (0.02, 0.01)] {
        let k = experts_needed(s, target, 0.95).unwrap();
        assert!(t_critical(0.95, k - 1) * s / (k as f64).sqrt() <= target);
        if k > 2 {
            assert!(t_critical(0.95, k - 2) * s / ((k - 1) as f64).sqrt() > target);
        }
    }
}

proptest! {
    #[test]
    fn aggregate_is_order_invariant(raw in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 4), 2..8), rot in 0usize..8) {
        let ws: Vec<WeightVector> = raw.iter().map(|r| wv(r)).collect();
        let crs: Vec<f64> = (0..ws.len()).map(|k| k as f64 / 100.0).collect();
        let mut ws2 = ws.clone();
        ws2.rotate_left(rot % ws.len());
        ws2.reverse();
        let a = aggregate(&ws, &crs, 0.95).unwrap();
        let b = aggregate(&ws2, &crs, 0.95).unwrap();
        prop_assert_eq!(a.mean_w, b.mean_w);
        prop_assert_eq!(a.half_width, b.half_width);
    }

    #[test]
    fn mean_lies_inside_expert_range(raw in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 3), 1..6)) {
        let ws: Vec<WeightVector> = raw.iter().map(|r| wv(r)).collect();
        let agg = aggregate(&ws, &vec![0.0; ws.len()], 0.9).unwrap();
        prop_assert!((agg.mean_w.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (c, (lo, hi)) in agg.ranges().into_iter().enumerate() {
            prop_assert!(agg.mean_w[c] >= lo - 1e-12 && agg.mean_w[c] <= hi + 1e-12);
        }
    }
}
