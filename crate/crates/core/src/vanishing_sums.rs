//! Counting vanishing sums `1 + Σ ζ^{2t_i} = 0` of roots of unity.
//!
//! [`delta`] is exact: running sums live in the reduced basis of `Z[ζ_p]`
//! (see [`ReducedPowers`]) so each tuple costs one vector add and one zero
//! test. [`delta_scaled`] handles an arbitrary complex scaling vector and is
//! necessarily numerical.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::ReducedPowers;
use crate::error::{Error, Result};
use crate::DEFAULT_WORK_CAP;

/// Entries with modulus at or below this are treated as zero.
pub const MIN_SCALING_MODULUS: f64 = 1e-12;

/// Default relative tolerance for the numerical vanishing tests.
pub const DEFAULT_SCALED_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaQuery {
    pub m: u32,
    pub p: u32,
}

impl DeltaQuery {
    pub fn new(m: u32, p: u32) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::InvalidArgument(format!(
                "delta needs m >= 1 and p >= 1, got m = {m}, p = {p}"
            )));
        }
        Ok(Self { m, p })
    }

    /// Number of ordered tuples the enumeration visits, `p^m`.
    pub fn tuples(&self) -> u128 {
        (self.p as u128).saturating_pow(self.m)
    }

    fn check_cap(&self, what: &'static str, cap: u64) -> Result<()> {
        let requested = self.tuples();
        if requested > cap as u128 {
            return Err(Error::WorkCapExceeded { what, requested, cap });
        }
        Ok(())
    }
}

/// A vector of nonzero complex numbers `(a_0, …, a_m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ScalingVector {
    entries: Vec<Complex64>,
}

impl ScalingVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("scaling vector is empty".into()));
        }
        if let Some(index) = entries
            .iter()
            .position(|a| a.norm().is_nan() || a.norm() <= MIN_SCALING_MODULUS)
        {
            return Err(Error::ZeroScalingEntry { index });
        }
        Ok(Self { entries })
    }

    pub fn ones(len: usize) -> Self {
        Self {
            entries: vec![Complex64::new(1.0, 0.0); len],
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries at the given indices, in order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let entries = indices
            .iter()
            .map(|&i| {
                self.entries.get(i).copied().ok_or_else(|| {
                    Error::InvalidArgument(format!("index {i} out of range for length {}", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(self.entries.iter().map(|a| a * c).collect())
    }
}

impl TryFrom<Vec<Complex64>> for ScalingVector {
    type Error = Error;

    fn try_from(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<ScalingVector> for Vec<Complex64> {
    fn from(a: ScalingVector) -> Self {
        a.entries
    }
}

/// Principal `p`-th root.
pub fn principal_root(z: Complex64, p: u32) -> Complex64 {
    Complex64::from_polar(z.norm().powf(1.0 / p as f64), z.arg() / p as f64)
}

/// `δ(m, p)` with the default work cap.
pub fn delta(m: u32, p: u32) -> Result<u64> {
    delta_capped(m, p, DEFAULT_WORK_CAP)
}

/// Number of ordered tuples `(t_1, …, t_m)` in `[1, p]^m` with
/// `1 + Σ ζ^{2 t_i} = 0`, for a fixed primitive `p`-th root `ζ`.
pub fn delta_capped(m: u32, p: u32, cap: u64) -> Result<u64> {
    delta_with_root(m, p, 1, cap)
}

/// As [`delta_capped`], but with `ζ` replaced by `ζ^k`. For `gcd(k, p) = 1`
/// this is another primitive root and the count must not change.
pub fn delta_with_root(m: u32, p: u32, k: u32, cap: u64) -> Result<u64> {
    let query = DeltaQuery::new(m, p)?;
    query.check_cap("delta", cap)?;
    let p = p as usize;
    let powers = ReducedPowers::new(p)?;

    // Distinct exponents 2tk mod p with their multiplicities.
    let mut mult = vec![0u64; p];
    for t in 1..=p {
        mult[(2 * t * k as usize) % p] += 1;
    }
    let steps: Vec<(usize, u64)> = mult
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(e, &c)| (e, c))
        .collect();

    let rank = powers.rank();
    let one = powers.one();
    let total = steps
        .par_iter()
        .map(|&(e, w)| {
            let mut stack = vec![0i64; rank * m as usize];
            for (s, (a, b)) in stack[..rank].iter_mut().zip(one.iter().zip(powers.power(e))) {
                *s = a + b;
            }
            w * count_completions(&powers, &steps, &mut stack, 1, m as usize)
        })
        .sum();
    Ok(total)
}

/// Weighted number of ways to extend the partial sum at `level - 1` to a
/// vanishing sum with `depth - level` more terms.
fn count_completions(
    powers: &ReducedPowers,
    steps: &[(usize, u64)],
    stack: &mut [i64],
    level: usize,
    depth: usize,
) -> u64 {
    let rank = powers.rank();
    if level == depth {
        return stack[(level - 1) * rank..level * rank].iter().all(|&c| c == 0) as u64;
    }
    let mut total = 0;
    for &(e, w) in steps {
        let (done, rest) = stack.split_at_mut(level * rank);
        let prev = &done[(level - 1) * rank..];
        for ((s, a), b) in rest[..rank].iter_mut().zip(prev).zip(powers.power(e)) {
            *s = a + b;
        }
        total += w * count_completions(powers, steps, stack, level + 1, depth);
    }
    total
}

/// Piecewise closed forms for `m <= 3`.
pub fn delta_closed_form(m: u32, p: u32) -> Result<u64> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let p = p as u64;
    match m {
        1 => Ok(if p.is_multiple_of(4) { 2 } else { 0 }),
        2 => Ok(match p % 6 {
            0 => 8,
            3 => 2,
            _ => 0,
        }),
        3 => Ok(if p.is_multiple_of(4) { 12 * p - 24 } else { 0 }),
        _ => Err(Error::InvalidArgument(format!(
            "no closed form for m = {m}; only m in 1..=3"
        ))),
    }
}

/// `δ(m, p, a)`: the number of solutions of `1 + Σ x_i^2 = 0`,
/// `x_i^p = a_i / a_0` with all entries nonzero.
pub fn delta_scaled(m: u32, p: u32, a: &ScalingVector, tol: f64, cap: u64) -> Result<u64> {
    if a.len() != m as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "scaling vector has {} entries, expected {}",
            a.len(),
            m + 1
        )));
    }
    let a0 = a.entries()[0];
    let roots: Vec<Complex64> = a.entries()[1..]
        .iter()
        .map(|ai| principal_root(ai / a0, p))
        .collect();
    count_scaled_solutions(p, &roots, tol, cap)
}

/// Counts tuples `t` with `|1 + Σ (b_i ζ^{t_i})^2| < tol · (1 + Σ |b_i|^2)`,
/// where `b` is any fixed choice of `p`-th roots.
pub fn count_scaled_solutions(p: u32, roots: &[Complex64], tol: f64, cap: u64) -> Result<u64> {
    let query = DeltaQuery::new(roots.len() as u32, p)?;
    query.check_cap("delta_scaled", cap)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let p = p as usize;
    let zeta = |k: usize| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / p as f64);
    let terms: Vec<Vec<Complex64>> = roots
        .iter()
        .map(|b| (0..p).map(|t| b * b * zeta(2 * t % p)).collect())
        .collect();
    let threshold = tol * (1.0 + roots.iter().map(|b| b.norm_sqr()).sum::<f64>());

    fn walk(terms: &[Vec<Complex64>], partial: Complex64, threshold: f64) -> u64 {
        match terms.split_first() {
            None => (partial.norm() < threshold) as u64,
            Some((row, rest)) => row.iter().map(|w| walk(rest, partial + w, threshold)).sum(),
        }
    }

    let one = Complex64::new(1.0, 0.0);
    let (first, rest) = terms.split_first().expect("m >= 1");
    Ok(first.par_iter().map(|w| walk(rest, one + w, threshold)).sum())
}
