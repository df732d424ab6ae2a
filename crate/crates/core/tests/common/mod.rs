#![allow(dead_code)]

use std::f64::consts::TAU;

use fermat_ed::vanishing_sums::ScalingVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Gaussian, resampled below modulus 0.1.
pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        if z.norm() >= 0.1 {
            return z;
        }
    }
}

pub fn gaussian_vec<R: Rng>(len: usize, rng: &mut R) -> Vec<Complex64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

pub fn random_scaling<R: Rng>(len: usize, rng: &mut R) -> ScalingVector {
    ScalingVector::new(gaussian_vec(len, rng)).unwrap()
}

pub fn unit(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// A scaling vector for which `1 + Σ x_i^2 = 0, x_i^p = a_i / a_0` has a
/// solution by construction: pick the `x_i` first, then set
/// `a = c · (1, x_1^p, …, x_m^p)` for a random `c`.
///
/// Even `variant`s use the unit-circle configurations (`x² = -1` for one
/// term, `{x_1², x_2²} = {ω, ω̄}` for two); odd ones an off-circle
/// configuration `x_2² = -1 - x_1²` with random `x_1`.
pub fn vanishing_scaling<R: Rng>(m: u32, p: u32, variant: usize, rng: &mut R) -> ScalingVector {
    let sign = |rng: &mut R| if rng.random::<bool>() { 1.0 } else { -1.0 };
    let squares: Vec<Complex64> = match (m, variant % 2) {
        (1, _) => vec![Complex64::new(-1.0, 0.0)],
        (2, 0) => {
            let w = unit(TAU / 3.0);
            if rng.random::<bool>() {
                vec![w, w.conj()]
            } else {
                vec![w.conj(), w]
            }
        }
        (2, _) => {
            let y = gaussian(rng);
            vec![y, -1.0 - y]
        }
        _ => panic!("only m = 1, 2"),
    };
    let c = gaussian(rng);
    let mut a = vec![c];
    for y in squares {
        let x = y.sqrt() * sign(rng);
        a.push(c * x.powu(p));
    }
    ScalingVector::new(a).unwrap()
}

/// A random point whose coordinates are `(a + bi) / 2^DYADIC_BITS` with
/// integer `a, b`, so it is exact both as `f64` and as a Gaussian integer
/// after scaling.
pub const DYADIC_BITS: u32 = 20;

pub fn dyadic_point<R: Rng>(len: usize, rng: &mut R) -> Vec<(i64, i64)> {
    let scale = (1u64 << DYADIC_BITS) as f64;
    (0..len)
        .map(|_| {
            let z = gaussian(rng);
            ((z.re * scale).round() as i64, (z.im * scale).round() as i64)
        })
        .collect()
}

pub fn dyadic_to_complex(point: &[(i64, i64)]) -> Vec<Complex64> {
    let scale = (1u64 << DYADIC_BITS) as f64;
    point
        .iter()
        .map(|&(a, b)| Complex64::new(a as f64 / scale, b as f64 / scale))
        .collect()
}

type Gaussian = (num_bigint::BigInt, num_bigint::BigInt);

fn gmul(x: &Gaussian, y: &Gaussian) -> Gaussian {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn gpow(x: &Gaussian, e: u32) -> Gaussian {
    let mut acc = (num_bigint::BigInt::from(1), num_bigint::BigInt::from(0));
    for _ in 0..e {
        acc = gmul(&acc, x);
    }
    acc
}

/// `x · 2^-shift` as a float without overflowing on the way.
fn scaled_to_f64(x: &num_bigint::BigInt, shift: u64) -> f64 {
    use num_traits::ToPrimitive;
    let drop = x.bits().saturating_sub(60);
    let mantissa = (x >> drop).to_f64().unwrap();
    let e = drop as i64 - shift as i64;
    mantissa * 2f64.powi((e / 2) as i32) * 2f64.powi((e - e / 2) as i32)
}

/// Exact value of the homogeneous `q` at `(z_i^p)` for a dyadic point `z`,
/// rounded to `f64` only at the end.
pub fn exact_q_at_powers(
    q: &fermat_ed::expcyclo::SparseIntegerPolynomial,
    p: u32,
    point: &[(i64, i64)],
) -> Complex64 {
    use num_bigint::BigInt;
    let degree = q.total_degree().unwrap_or(0);
    let bases: Vec<Gaussian> = point
        .iter()
        .map(|&(a, b)| gpow(&(BigInt::from(a), BigInt::from(b)), p))
        .collect();
    let mut powers: Vec<Vec<Gaussian>> = bases
        .iter()
        .map(|b| vec![(BigInt::from(1), BigInt::from(0)), b.clone()])
        .collect();
    let mut re = BigInt::from(0);
    let mut im = BigInt::from(0);
    for (exps, c) in q.terms_grlex() {
        let mut mono = (c.clone(), BigInt::from(0));
        for (i, &e) in exps.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = gmul(powers[i].last().unwrap(), &bases[i]);
                powers[i].push(next);
            }
            mono = gmul(&mono, &powers[i][e as usize]);
        }
        re += mono.0;
        im += mono.1;
    }
    let shift = DYADIC_BITS as u64 * p as u64 * degree;
    Complex64::new(scaled_to_f64(&re, shift), scaled_to_f64(&im, shift))
}
