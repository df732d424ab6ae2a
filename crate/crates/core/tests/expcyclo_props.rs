mod common;

use std::f64::consts::TAU;

use fermat_ed::expcyclo::{
    build_p, build_q, eval_q, factor_product, scaled_vanishing, SparseIntegerPolynomial, DEFAULT_EVAL_CAP,
    DEFAULT_FACTOR_CAP, DEFAULT_VANISHING_TOL,
};
use fermat_ed::vanishing_sums::{delta_scaled, principal_root, DEFAULT_SCALED_TOL};
use fermat_ed::DEFAULT_WORK_CAP;
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

/// `(m, p)` with `p^m <= 64` (and `m <= 6` for `p = 1`) whose expansion
/// fits under the monomial cap; everything else in that range is `(6, 2)`.
fn small_pairs() -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for p in 1..=64u32 {
        for m in 1..=6u32 {
            if (p as u64).pow(m) <= 64 && (m, p) != (6, 2) {
                v.push((m, p));
            }
        }
    }
    v
}

#[test]
fn oversized_expansion_is_refused() {
    assert!(matches!(
        build_q(6, 2, DEFAULT_FACTOR_CAP),
        Err(fermat_ed::Error::WorkCapExceeded {
            what: "build_P monomials",
            ..
        })
    ));
}

#[test]
fn linear_case_is_a_binomial() {
    for p in 1..=8u32 {
        let sign = if p % 2 == 0 { -1 } else { 1 };
        let expected = SparseIntegerPolynomial::from_terms(
            2,
            [(vec![1, 0], BigInt::from(1)), (vec![0, 1], BigInt::from(sign))],
        )
        .unwrap();
        assert_eq!(build_q(1, p, DEFAULT_FACTOR_CAP).unwrap(), expected, "p = {p}");
    }
}

/// `Q(z_0^p, …, z_m^p)`, evaluated exactly, equals the product
/// `∏ (z_0 + Σ ζ^{t_k} z_k)` evaluated in floating point.
#[test]
fn substitution_identity() {
    let mut rng = common::rng(64);
    for (m, p) in small_pairs() {
        let q = build_q(m, p, DEFAULT_FACTOR_CAP).unwrap();
        assert!(q.is_homogeneous());
        assert_eq!(q.total_degree(), Some((p as u64).pow(m) / p as u64));
        for _ in 0..50 {
            let point = common::dyadic_point(m as usize + 1, &mut rng);
            let z = common::dyadic_to_complex(&point);
            let exact = common::exact_q_at_powers(&q, p, &point);
            let product = factor_product(p, &z, DEFAULT_EVAL_CAP).unwrap().value();
            assert!(
                (product - exact).norm() <= 1e-8 * exact.norm(),
                "m = {m}, p = {p}: {product} vs {exact}"
            );
            let zp: Vec<Complex64> = z.iter().map(|w| w.powu(p)).collect();
            let via_roots = eval_q(m, p, &zp, DEFAULT_EVAL_CAP).unwrap();
            assert!(
                (via_roots - exact).norm() <= 1e-8 * exact.norm(),
                "m = {m}, p = {p}"
            );
        }
    }
}

/// The expanded `P` agrees with `Q` after substitution wherever the
/// expansion is small enough to evaluate without heavy cancellation.
#[test]
fn expanded_p_matches_q() {
    let mut rng = common::rng(65);
    for (m, p) in small_pairs()
        .into_iter()
        .filter(|&(m, p)| (p as u64).pow(m) <= 16)
    {
        let big_p = build_p(m, p, DEFAULT_FACTOR_CAP).unwrap();
        let q = build_q(m, p, DEFAULT_FACTOR_CAP).unwrap();
        for _ in 0..50 {
            let z = common::gaussian_vec(m as usize + 1, &mut rng);
            let zp: Vec<Complex64> = z.iter().map(|w| w.powu(p)).collect();
            let direct = big_p.eval(&z);
            let via_q = q.eval(&zp).unwrap();
            assert!(
                (direct - via_q).norm() <= 1e-8 * direct.norm().max(via_q.norm()),
                "m = {m}, p = {p}"
            );
        }
    }
}

#[test]
fn json_terms_round_trip() {
    for (m, p) in small_pairs() {
        let q = build_q(m, p, DEFAULT_FACTOR_CAP).unwrap();
        let json = serde_json::to_string(&q.to_json_terms()).unwrap();
        let back = SparseIntegerPolynomial::from_json_terms(
            q.num_vars(),
            &serde_json::from_str::<Vec<_>>(&json).unwrap(),
        )
        .unwrap();
        assert_eq!(back, q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Multiplying the non-leading roots by p-th roots of unity permutes
    /// the factors.
    #[test]
    fn product_is_branch_invariant(
        m in 1u32..=3,
        p in 1u32..=7,
        seed in any::<u64>(),
        shifts in prop::collection::vec(0u32..7, 3),
    ) {
        let point = common::gaussian_vec(m as usize + 1, &mut common::rng(seed));
        let mut roots: Vec<Complex64> = point.iter().map(|&a| principal_root(a, p)).collect();
        for (b, s) in roots.iter_mut().skip(1).zip(&shifts) {
            *b *= common::unit(TAU * (s % p) as f64 / p as f64);
        }
        let base = eval_q(m, p, &point, DEFAULT_EVAL_CAP).unwrap();
        let shifted = factor_product(p, &roots, DEFAULT_EVAL_CAP).unwrap().value();
        prop_assert!((base - shifted).norm() <= 1e-8 * base.norm());
    }

    #[test]
    fn vanishing_ignores_common_factor(m in 1u32..=2, p in 1u32..=8, seed in any::<u64>(), vanishing in any::<bool>()) {
        let mut rng = common::rng(seed);
        let a = if vanishing {
            common::vanishing_scaling(m, p, seed as usize, &mut rng)
        } else {
            common::random_scaling(m as usize + 1, &mut rng)
        };
        let c = common::gaussian(&mut rng);
        let v = scaled_vanishing(m, p, &a, DEFAULT_VANISHING_TOL, DEFAULT_EVAL_CAP).unwrap();
        prop_assert_eq!(v, scaled_vanishing(m, p, &a.scaled(c).unwrap(), DEFAULT_VANISHING_TOL, DEFAULT_EVAL_CAP).unwrap());
        prop_assert_eq!(v, vanishing);
    }

    /// Vanishing of Q and a nonzero scaled count are the same condition.
    #[test]
    fn vanishing_iff_scaled_count(m in 1u32..=2, p in 1u32..=8, seed in any::<u64>(), vanishing in any::<bool>()) {
        let mut rng = common::rng(seed);
        let a = if vanishing {
            common::vanishing_scaling(m, p, seed as usize, &mut rng)
        } else {
            common::random_scaling(m as usize + 1, &mut rng)
        };
        let q = scaled_vanishing(m, p, &a, DEFAULT_VANISHING_TOL, DEFAULT_EVAL_CAP).unwrap();
        let count = delta_scaled(m, p, &a, DEFAULT_SCALED_TOL, DEFAULT_WORK_CAP).unwrap();
        prop_assert_eq!(q, count > 0);
    }
}
