use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use proptest::prelude::*;

use pairwise::weights::{approx_weights, consistency_report, eigen_weights, random_index, weight_report};
use pairwise::{pair_sequence, JudgmentMatrix, JudgmentValue, Ratio};

fn positive_weights(h: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    h.prop_flat_map(|h| prop::collection::vec(0.01f64..100.0, h))
}

/// Complete matrix with arbitrary positive upper-triangle entries.
fn arbitrary_matrix(h: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = JudgmentMatrix> {
    h.prop_flat_map(|h| {
        prop::collection::vec(-2.2f64..2.2, h * (h - 1) / 2).prop_map(move |logs| {
            let mut m = JudgmentMatrix::with_size(h).unwrap();
            for ((i, j), l) in pair_sequence(h).unwrap().into_iter().zip(logs) {
                m.set(i, j, JudgmentValue::real(l.exp()).unwrap()).unwrap();
            }
            m
        })
    })
}

/// Largest real eigenvalue and its positive eigenvector from a dense
/// general eigensolver, normalized to sum 1.
fn dense_oracle(m: &JudgmentMatrix) -> (f64, Vec<f64>) {
    let h = m.h();
    let a = DMatrix::from_row_slice(h, h, &m.dense().unwrap());
    let lambda = a
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    // null space of (A - λI) via the SVD's smallest singular vector
    let shifted = &a - DMatrix::identity(h, h) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let (k, _) = svd.singular_values.iter().enumerate().fold((0, f64::INFINITY), |best, (k, &s)| if s < best.1 { (k, s) } else { best });
    let v: Vec<f64> = v_t.row(k).iter().copied().collect();
    let total: f64 = v.iter().sum();
    (lambda, v.iter().map(|x| x / total).collect())
}

/// Closed-form λ_max of a 3x3 reciprocal matrix.
fn lambda3(a12: f64, a13: f64, a23: f64) -> f64 {
    let x = a12 * a23 / a13;
    1.0 + x.cbrt() + x.cbrt().recip()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn consistent_matrix_recovers_weights(w in positive_weights(3..=12)) {
        let m = JudgmentMatrix::from_weights(&w).unwrap();
        let total: f64 = w.iter().sum();
        let r = weight_report(&m).unwrap();
        for (k, x) in w.iter().enumerate() {
            prop_assert!((r.w_approx[k] - x / total).abs() < 1e-9);
            prop_assert!((r.w_eigen[k] - x / total).abs() < 1e-9);
        }
        prop_assert!((r.lambda_max - w.len() as f64).abs() < 1e-9);
        prop_assert!(r.cr.abs() < 1e-9);
    }

    #[test]
    fn reciprocity_holds_after_every_set(m in arbitrary_matrix(2..=9)) {
        let h = m.h();
        for i in 0..h {
            prop_assert_eq!(m.value(i, i), Some(1.0));
            for j in 0..h {
                let (a, b) = (m.value(i, j).unwrap(), m.value(j, i).unwrap());
                prop_assert!((a * b - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weights_are_permutation_covariant(m in arbitrary_matrix(3..=8), seed in any::<u64>()) {
        let h = m.h();
        let mut perm: Vec<usize> = (0..h).collect();
        // Fisher-Yates from a cheap LCG so the permutation follows the seed
        let mut s = seed | 1;
        for k in (1..h).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let p = m.permuted(&perm).unwrap();
        let (a, b) = (weight_report(&m).unwrap(), weight_report(&p).unwrap());
        for (new, &old) in perm.iter().enumerate() {
            prop_assert!((b.w_approx[new] - a.w_approx[old]).abs() < 1e-12);
            prop_assert!((b.w_eigen[new] - a.w_eigen[old]).abs() < 1e-9);
        }
        prop_assert!((a.lambda_max - b.lambda_max).abs() < 1e-9);
    }

    #[test]
    fn eigen_matches_dense_solver(m in arbitrary_matrix(3..=8)) {
        let (w, lambda) = eigen_weights(&m).unwrap();
        let (l_ref, w_ref) = dense_oracle(&m);
        prop_assert!((lambda - l_ref).abs() < 1e-8, "{} vs {}", lambda, l_ref);
        for k in 0..m.h() {
            prop_assert!((w[k] - w_ref[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn three_by_three_closed_form(l12 in -2.2f64..2.2, l13 in -2.2f64..2.2, l23 in -2.2f64..2.2) {
        let (a12, a13, a23) = (l12.exp(), l13.exp(), l23.exp());
        let mut m = JudgmentMatrix::with_size(3).unwrap();
        m.set(0, 1, JudgmentValue::real(a12).unwrap()).unwrap();
        m.set(0, 2, JudgmentValue::real(a13).unwrap()).unwrap();
        m.set(1, 2, JudgmentValue::real(a23).unwrap()).unwrap();
        let (_, lambda) = eigen_weights(&m).unwrap();
        prop_assert!((lambda - lambda3(a12, a13, a23)).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn lambda_is_at_least_h(m in arbitrary_matrix(3..=7)) {
        let (_, lambda) = eigen_weights(&m).unwrap();
        prop_assert!(lambda >= m.h() as f64 - 1e-9);
        let c = consistency_report(&m).unwrap();
        prop_assert!(c.ci >= 0.0 && c.cr >= 0.0);
    }
}

fn exact(n: u32, d: u32) -> JudgmentValue {
    JudgmentValue::Exact(Ratio::new(n, d).unwrap())
}

#[test]
fn three_by_three_worked_value() {
    let mut m = JudgmentMatrix::with_size(3).unwrap();
    m.set(0, 1, exact(2, 1)).unwrap();
    m.set(0, 2, exact(1, 2)).unwrap();
    m.set(1, 2, exact(1, 2)).unwrap();
    let (_, lambda) = eigen_weights(&m).unwrap();
    // x = 2 * 0.5 / 0.5 = 2
    assert_abs_diff_eq!(lambda, 1.0 + 2f64.cbrt() + 2f64.cbrt().recip(), epsilon = 1e-12);
    assert_abs_diff_eq!(lambda, 3.053622, epsilon = 1e-6);
}

#[test]
fn random_index_closed_form() {
    for h in 3..=64usize {
        let expected = 1.98 * (h as f64 - 2.0) / h as f64;
        assert_eq!(random_index(h).unwrap(), expected);
    }
    assert_abs_diff_eq!(random_index(10).unwrap(), 1.584, epsilon = 1e-15);
}

#[test]
fn inconsistent_fixture_is_flagged() {
    // one cyclic 4x4 matrix; CR checked against the dense oracle
    let mut m = JudgmentMatrix::with_size(4).unwrap();
    for (i, j, n, d) in [(0, 1, 3, 1), (0, 2, 1, 1), (0, 3, 9, 1), (1, 2, 1, 1), (1, 3, 1, 3), (2, 3, 3, 1)] {
        m.set(i, j, exact(n, d)).unwrap();
    }
    let r = weight_report(&m).unwrap();
    let (l_ref, _) = dense_oracle(&m);
    let cr_ref = (l_ref - 4.0) / 3.0 / (1.98 * 2.0 / 4.0);
    assert_abs_diff_eq!(r.cr, cr_ref, epsilon = 1e-9);
    assert!(r.cr > 0.1 && !r.acceptable);
    assert_abs_diff_eq!(r.cr, 0.274, epsilon = 1e-3);
}

#[test]
fn approx_weights_by_hand() {
    // columns of [[1,3],[1/3,1]] normalize to (3/4, 1/4) each
    let mut m = JudgmentMatrix::with_size(2).unwrap();
    m.set(0, 1, exact(3, 1)).unwrap();
    let w = approx_weights(&m).unwrap();
    assert_abs_diff_eq!(w[0], 0.75, epsilon = 1e-15);
    let r = weight_report(&m).unwrap();
    assert_eq!((r.ci, r.ri, r.cr, r.acceptable), (0.0, 0.0, 0.0, true));
}
