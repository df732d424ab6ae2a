//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ_p]`.
//!
//! Elements are stored in group-algebra form: a length-`p` coefficient vector
//! over the powers `ζ^0, …, ζ^{p-1}`. Several vectors name the same ring
//! element; two are equal exactly when their difference is divisible by the
//! cyclotomic polynomial `Φ_p`. Reduction only happens in the zero test and
//! in [`CyclotomicInteger::as_rational_integer`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense univariate integer polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidArgument("division by the zero polynomial".into()))?;
        if !divisor.leading().is_some_and(One::is_one) {
            return Err(Error::InvalidArgument("divisor is not monic".into()));
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[k]);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs[..dd].iter().enumerate() {
                rem[k - dd + j] -= &c * dj;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n)
        .take_while(|i| i * i <= n)
        .filter(|&i| n.is_multiple_of(i))
        .collect();
    let upper: Vec<usize> = out.iter().rev().map(|&i| n / i).filter(|&j| j * j != n).collect();
    out.extend(upper);
    out
}

struct PhiEntry {
    poly: IntegerPolynomial,
    small: Vec<i64>,
}

fn phi_cache() -> &'static Mutex<HashMap<usize, Arc<PhiEntry>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PhiEntry>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn phi_entry(p: usize) -> Arc<PhiEntry> {
    if let Some(hit) = phi_cache().lock().expect("phi cache poisoned").get(&p) {
        return Arc::clone(hit);
    }
    let mut poly = IntegerPolynomial::x_pow_minus_one(p);
    for q in divisors(p).into_iter().filter(|&q| q < p) {
        let (quot, rem) = poly
            .div_rem_monic(&phi_entry(q).poly)
            .expect("cyclotomic polynomials are monic");
        debug_assert!(rem.is_zero());
        poly = quot;
    }
    let small = poly
        .coeffs()
        .iter()
        .map(|c| c.to_i64().expect("cyclotomic coefficient fits in i64"))
        .collect();
    let entry = Arc::new(PhiEntry { poly, small });
    phi_cache()
        .lock()
        .expect("phi cache poisoned")
        .entry(p)
        .or_insert(entry)
        .clone()
}

/// The `p`-th cyclotomic polynomial `Φ_p`.
///
/// Computed by dividing `x^p - 1` exactly by `Φ_q` for every proper divisor
/// `q` of `p`. Results are memoized.
pub fn cyclotomic_polynomial(p: usize) -> Result<IntegerPolynomial> {
    if p == 0 {
        return Err(Error::InvalidArgument("cyclotomic order must be positive".into()));
    }
    Ok(phi_entry(p).poly.clone())
}

/// Euler's totient, read off as `deg Φ_p`.
pub fn totient(p: usize) -> usize {
    phi_entry(p).small.len() - 1
}

/// Reduces `coeffs` in place modulo the monic `phi` and reports whether the
/// remainder vanishes.
fn remainder_vanishes(coeffs: &mut [BigInt], phi: &[i64]) -> bool {
    let deg = phi.len() - 1;
    for k in (deg..coeffs.len()).rev() {
        let c = std::mem::take(&mut coeffs[k]);
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi[..deg].iter().enumerate() {
            if pj != 0 {
                coeffs[k - deg + j] -= &c * pj;
            }
        }
    }
    coeffs[..deg.min(coeffs.len())].iter().all(Zero::is_zero)
}

/// An element of `Z[ζ_p]` in group-algebra form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    order: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Self {
            order,
            coeffs: vec![BigInt::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::root_power(order, 0)
    }

    pub fn from_coeffs(order: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be positive".into()));
        }
        if coeffs.len() != order {
            return Err(Error::InvalidArgument(format!(
                "expected {order} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { order, coeffs })
    }

    pub fn from_i64(order: usize, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(order, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `ζ^e`, with the exponent reduced modulo the order.
    pub fn root_power(order: usize, exponent: i64) -> Self {
        let mut out = Self::zero(order);
        let k = exponent.rem_euclid(order as i64) as usize;
        out.coeffs[k] = BigInt::one();
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplication by `ζ^shift`: a cyclic rotation of the coefficients.
    pub fn mul_root_power(&self, shift: usize) -> Self {
        let p = self.order;
        let mut coeffs = vec![BigInt::zero(); p];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(k + shift) % p] = c.clone();
        }
        Self { order: p, coeffs }
    }

    /// Cyclic convolution of the coefficient vectors.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let p = self.order;
        let mut coeffs = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Self { order: p, coeffs })
    }

    /// True iff the representative polynomial is divisible by `Φ_p`.
    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(Zero::is_zero) {
            return true;
        }
        let phi = phi_entry(self.order);
        remainder_vanishes(&mut self.coeffs.clone(), &phi.small)
    }

    /// Ring equality: the difference reduces to zero modulo `Φ_p`.
    pub fn ring_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// The remainder of the representative polynomial modulo `Φ_p`.
    pub fn reduced(&self) -> IntegerPolynomial {
        let phi = phi_entry(self.order);
        IntegerPolynomial::new(self.coeffs.clone())
            .div_rem_monic(&phi.poly)
            .expect("cyclotomic polynomials are monic")
            .1
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        let rem = self.reduced();
        match rem.degree() {
            None => Some(BigInt::zero()),
            Some(0) => Some(rem.coeffs()[0].clone()),
            Some(_) => None,
        }
    }

    /// Numerical value at `ζ = exp(2πi/p)`.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / p)
                    * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Precomputed remainders `ζ^k mod Φ_p` for `0 <= k < p`.
///
/// Enumerations that add many roots of unity keep their running sums in the
/// reduced basis of rank `φ(p)`; the sum is zero iff every coordinate is.
/// By linearity this is the same test as [`CyclotomicInteger::is_zero`].
#[derive(Clone, Debug)]
pub struct ReducedPowers {
    order: usize,
    rank: usize,
    table: Vec<i64>,
}

impl ReducedPowers {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be positive".into()));
        }
        let rank = totient(order);
        let mut table = Vec::with_capacity(order * rank);
        for k in 0..order {
            let rem = CyclotomicInteger::root_power(order, k as i64).reduced();
            let mut row = vec![0i64; rank];
            for (slot, c) in row.iter_mut().zip(rem.coeffs()) {
                *slot = c.to_i64().ok_or_else(|| {
                    Error::Inconsistent(format!("ζ^{k} mod Φ_{order} has a huge coefficient"))
                })?;
            }
            table.extend(row);
        }
        Ok(Self { order, rank, table })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ(p)`, the length of a reduced vector.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduced coordinates of `ζ^k`.
    pub fn power(&self, k: usize) -> &[i64] {
        let k = k % self.order;
        &self.table[k * self.rank..(k + 1) * self.rank]
    }

    /// Reduced coordinates of the rational integer 1.
    pub fn one(&self) -> Vec<i64> {
        self.power(0).to_vec()
    }
}

/// `gcd(k, p) == 1`.
pub fn is_unit_mod(k: usize, p: usize) -> bool {
    k.gcd(&p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(p: usize, c: &[i64]) -> CyclotomicInteger {
        CyclotomicInteger::from_i64(p, c).unwrap()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(
            cyclotomic_polynomial(1).unwrap(),
            IntegerPolynomial::from_i64(&[-1, 1])
        );
        assert_eq!(
            cyclotomic_polynomial(4).unwrap(),
            IntegerPolynomial::from_i64(&[1, 0, 1])
        );
        assert_eq!(
            cyclotomic_polynomial(6).unwrap(),
            IntegerPolynomial::from_i64(&[1, -1, 1])
        );
        assert!(cyclotomic_polynomial(0).is_err());
    }

    #[test]
    fn phi_105_has_a_coefficient_of_minus_two() {
        let phi = cyclotomic_polynomial(105).unwrap();
        assert_eq!(phi.degree(), Some(48));
        assert!(phi.coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn divisor_product_is_x_pow_minus_one() {
        for p in 1..=60 {
            let prod = divisors(p)
                .into_iter()
                .map(|q| cyclotomic_polynomial(q).unwrap())
                .fold(IntegerPolynomial::one(), |acc, f| acc.mul(&f));
            assert_eq!(prod, IntegerPolynomial::x_pow_minus_one(p), "p = {p}");
        }
    }

    #[test]
    fn root_power_reduces_exponent() {
        assert_eq!(CyclotomicInteger::root_power(3, 5), ci(3, &[0, 0, 1]));
        assert_eq!(CyclotomicInteger::root_power(7, 0), CyclotomicInteger::one(7));
        assert_eq!(CyclotomicInteger::root_power(4, -1), ci(4, &[0, 0, 0, 1]));
        let z2 = CyclotomicInteger::root_power(4, 2);
        assert!(z2.ring_eq(&CyclotomicInteger::one(4).neg()).unwrap());
    }

    #[test]
    fn addition() {
        let one = CyclotomicInteger::one(5);
        assert_eq!(one.add(&one).unwrap(), ci(5, &[2, 0, 0, 0, 0]));
        let x = ci(5, &[1, -2, 0, 3, 4]);
        assert_eq!(x.add(&CyclotomicInteger::zero(5)).unwrap(), x);
        let s = one.add(&CyclotomicInteger::root_power(4, 2));
        assert!(matches!(s, Err(Error::OrderMismatch { left: 5, right: 4 })));
        let s = CyclotomicInteger::one(4)
            .add(&CyclotomicInteger::root_power(4, 2))
            .unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn multiplication() {
        let a = CyclotomicInteger::root_power(7, 3);
        let b = CyclotomicInteger::root_power(7, 6);
        assert_eq!(a.mul(&b).unwrap(), CyclotomicInteger::root_power(7, 2));
        let x = ci(7, &[3, 0, -1, 2, 0, 0, 5]);
        assert_eq!(x.mul(&CyclotomicInteger::one(7)).unwrap(), x);

        let l = ci(3, &[1, 1, 0]);
        let r = ci(3, &[1, 0, 1]);
        let prod = l.mul(&r).unwrap();
        assert_eq!(prod, ci(3, &[2, 1, 1]));
        assert!(!prod.is_zero());
        assert!(prod.ring_eq(&CyclotomicInteger::one(3)).unwrap());
        assert_eq!(prod.as_rational_integer(), Some(BigInt::from(1)));
        assert!(a.mul(&CyclotomicInteger::one(5)).is_err());
    }

    #[test]
    fn zero_test() {
        assert!(ci(4, &[1, 0, 1, 0]).is_zero());
        for p in 2..=30 {
            let full = CyclotomicInteger::from_i64(p, &vec![1; p]).unwrap();
            assert!(full.is_zero(), "p = {p}");
        }
        assert!(!ci(3, &[1, 1, 0]).is_zero());
        assert!(CyclotomicInteger::zero(1).is_zero());
        assert!(!CyclotomicInteger::one(1).is_zero());
    }

    #[test]
    fn rational_integers() {
        assert_eq!(
            ci(6, &[5, 0, 0, 0, 0, 0]).as_rational_integer(),
            Some(BigInt::from(5))
        );
        assert_eq!(ci(4, &[1, 0, 1, 0]).as_rational_integer(), Some(BigInt::zero()));
        assert_eq!(CyclotomicInteger::root_power(3, 1).as_rational_integer(), None);
        // ζ_3 + ζ_3^2 = -1
        assert_eq!(ci(3, &[0, 1, 1]).as_rational_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn half_turn_cancels() {
        for p in (2..=40).step_by(2) {
            for e in 0..p as i64 {
                let s = CyclotomicInteger::root_power(p, e)
                    .add(&CyclotomicInteger::root_power(p, e + p as i64 / 2))
                    .unwrap();
                assert!(s.is_zero(), "p = {p}, e = {e}");
            }
        }
    }

    #[test]
    fn reduced_powers_match_big_reduction() {
        for p in [1, 2, 6, 12, 15, 30] {
            let rp = ReducedPowers::new(p).unwrap();
            assert_eq!(rp.rank(), totient(p));
            for k in 0..p {
                let rem = CyclotomicInteger::root_power(p, k as i64).reduced();
                let mut want = vec![0i64; rp.rank()];
                for (w, c) in want.iter_mut().zip(rem.coeffs()) {
                    *w = c.to_i64().unwrap();
                }
                assert_eq!(rp.power(k), want.as_slice());
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(cyclotomic_polynomial(6).unwrap().to_string(), "x^2 - x + 1");
        assert_eq!(ci(3, &[2, 1, 0]).to_string(), "2 + 1*z^1");
    }
}
