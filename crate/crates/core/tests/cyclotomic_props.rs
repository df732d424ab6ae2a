use std::f64::consts::TAU;

use fermat_ed::cyclotomic::{cyclotomic_polynomial, CyclotomicInteger, IntegerPolynomial};
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

fn element(p: usize) -> impl Strategy<Value = CyclotomicInteger> {
    prop::collection::vec(-5i64..=5, p).prop_map(move |c| CyclotomicInteger::from_i64(p, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (CyclotomicInteger, CyclotomicInteger, CyclotomicInteger)> {
    (1usize..=24).prop_flat_map(|p| (element(p), element(p), element(p)))
}

/// Plain floating evaluation at exp(2πi/p).
fn float_value(x: &CyclotomicInteger) -> Complex64 {
    let p = x.order() as f64;
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| Complex64::from_polar(1.0, TAU * k as f64 / p) * c.to_string().parse::<f64>().unwrap())
        .sum()
}

/// `Σ_j ζ^{j p/q}`, which is zero for every divisor `q > 1` of `p`.
fn subgroup_sum(p: usize, q: usize) -> CyclotomicInteger {
    let mut c = vec![0i64; p];
    for j in 0..q {
        c[j * p / q] += 1;
    }
    CyclotomicInteger::from_i64(p, &c).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.mul(&c).unwrap().ring_eq(&a.mul(&b.mul(&c).unwrap()).unwrap()).unwrap());
        prop_assert!(ab.ring_eq(&b.mul(&a).unwrap()).unwrap());
        prop_assert!(a.add(&b).unwrap().ring_eq(&b.add(&a).unwrap()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = ab.add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.ring_eq(&rhs).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert!(a.mul(&CyclotomicInteger::one(a.order())).unwrap().ring_eq(&a).unwrap());
    }

    #[test]
    fn half_turn_cancels(half in 1usize..=30, e in -100i64..100) {
        let p = 2 * half;
        let s = CyclotomicInteger::root_power(p, e)
            .add(&CyclotomicInteger::root_power(p, e + half as i64))
            .unwrap();
        prop_assert!(s.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Half the samples are multiplied by a vanishing subgroup sum so both
    /// outcomes of the zero test are exercised.
    #[test]
    fn zero_test_matches_floats(
        (x, q_pick, make_zero) in (2usize..=24).prop_flat_map(|p| (element(p), 0usize..64, any::<bool>()))
    ) {
        let p = x.order();
        let x = if make_zero {
            let divisors: Vec<usize> = (2..=p).filter(|q| p % q == 0).collect();
            x.mul(&subgroup_sum(p, divisors[q_pick % divisors.len()])).unwrap()
        } else {
            x
        };
        let scale = 1.0 + x.coeffs().iter().map(|c| c.to_string().parse::<f64>().unwrap().abs()).sum::<f64>();
        let numeric_zero = float_value(&x).norm() < 1e-9 * scale;
        prop_assert_eq!(x.is_zero(), numeric_zero);
        if make_zero {
            prop_assert!(x.is_zero());
        }
    }
}

#[test]
fn divisor_product_is_x_p_minus_one() {
    for p in 1..=60usize {
        let product = (1..=p)
            .filter(|q| p % q == 0)
            .fold(IntegerPolynomial::one(), |acc, q| {
                acc.mul(&cyclotomic_polynomial(q).unwrap())
            });
        assert_eq!(product, IntegerPolynomial::x_pow_minus_one(p), "p = {p}");
    }
}

#[test]
fn documented_elements() {
    let z3 = |e| CyclotomicInteger::root_power(3, e);
    let one = CyclotomicInteger::one(3);
    let prod = one.add(&z3(1)).unwrap().mul(&one.add(&z3(2)).unwrap()).unwrap();
    assert_eq!(prod.coeffs(), &[2, 1, 1].map(BigInt::from));
    assert!(!prod.is_zero());
    assert!(prod.ring_eq(&one).unwrap());
    assert_eq!(prod.as_rational_integer(), Some(BigInt::from(1)));
    assert_eq!(z3(1).as_rational_integer(), None);
    assert_eq!(CyclotomicInteger::root_power(3, 5).coeffs(), z3(2).coeffs());
    assert_eq!(cyclotomic_polynomial(6).unwrap().to_string(), "x^2 - x + 1");
    for p in 2..=40 {
        let all: Vec<i64> = vec![1; p];
        assert!(CyclotomicInteger::from_i64(p, &all).unwrap().is_zero());
    }
}
