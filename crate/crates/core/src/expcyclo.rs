//! Exponential cyclotomic polynomials.
//!
//! `P_{m,p}(A) = ∏_{t ∈ [1,p]^m} (A_0 + Σ_k ζ^{t_k} A_k)` only involves the
//! `p`-th powers of its variables and has rational integer coefficients, so it
//! is `Q_{m,p}(A_0^p, …, A_m^p)` for an integer polynomial `Q_{m,p}`. The
//! exact construction is only feasible for small `p^m`; the vanishing test on
//! scaling vectors evaluates the product formula instead.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::vanishing_sums::{principal_root, ScalingVector};

/// Default cap on `p^m` for the exact construction.
pub const DEFAULT_FACTOR_CAP: u64 = 4096;
/// Cap on the number of monomials of degree `p^m` in `m + 1` variables, the
/// size the expansion of `P_{m,p}` can reach. `(m, p) = (5, 2)` needs about
/// 4.4e5 and is fine; `(6, 2)` needs 1.3e8 and is refused.
pub const MAX_EXPANSION_TERMS: u64 = 2_000_000;
/// Default cap on `p^m` for product-formula evaluation.
pub const DEFAULT_EVAL_CAP: u64 = 10_000_000;
/// Default relative tolerance for [`scaled_vanishing`].
pub const DEFAULT_VANISHING_TOL: f64 = 1e-6;

type Exponents = Vec<u32>;

/// Graded lexicographic order, largest first.
fn grlex_desc(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn check_cap(m: u32, p: u32, cap: u64, what: &'static str) -> Result<u128> {
    if m == 0 || p == 0 {
        return Err(Error::InvalidArgument(format!(
            "need m >= 1 and p >= 1, got m = {m}, p = {p}"
        )));
    }
    let requested = (p as u128).saturating_pow(m);
    if requested > cap as u128 {
        return Err(Error::WorkCapExceeded { what, requested, cap });
    }
    Ok(requested)
}

/// Multivariate polynomial with big-integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntegerPolynomial {
    num_vars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

/// One term of the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl SparseIntegerPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Result<Self> {
        let mut out = Self::zero(num_vars);
        for (exps, c) in terms {
            out.add_term(exps, c)?;
        }
        Ok(out)
    }

    /// Adds `c · x^exps`, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Exponents, c: BigInt) -> Result<()> {
        if exps.len() != self.num_vars {
            return Err(Error::InvalidArgument(format!(
                "exponent vector of length {} in a polynomial of {} variables",
                exps.len(),
                self.num_vars
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Terms in graded lexicographic order, largest first.
    pub fn terms_grlex(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| grlex_desc(a.0, b.0));
        out
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u64).sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum::<u64>());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.num_vars {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.num_vars
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(exps, c)| {
                exps.iter().zip(point).fold(
                    Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0),
                    |acc, (&e, z)| acc * z.powu(e),
                )
            })
            .sum())
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms_grlex()
            .into_iter()
            .map(|(e, c)| JsonTerm {
                exponents: e.clone(),
                coefficient: c.to_string(),
            })
            .collect()
    }

    pub fn from_json_terms(num_vars: usize, terms: &[JsonTerm]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| {
                let c: BigInt = t
                    .coefficient
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad coefficient {:?}", t.coefficient)))?;
                Ok((t.exponents.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(num_vars, parsed)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, exps: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in exps.iter().enumerate().filter(|(_, &e)| e > 0) {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        match e {
            1 => write!(f, "x{i}")?,
            _ => write!(f, "x{i}^{e}")?,
        }
    }
    Ok(())
}

/// Canonical text: variables `x0..xm`, terms in descending graded
/// lexicographic order, e.g. `x0^2 - 2*x0*x1 + x1^2`.
impl fmt::Display for SparseIntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in self.terms_grlex().into_iter().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let constant = exps.iter().all(|&e| e == 0);
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, exps)?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with coefficients in `Z[ζ_p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicCoefficientPolynomial {
    num_vars: usize,
    order: usize,
    terms: BTreeMap<Exponents, CyclotomicInteger>,
}

impl CyclotomicCoefficientPolynomial {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, CyclotomicInteger> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Option<&CyclotomicInteger> {
        self.terms.get(exps)
    }

    pub fn is_homogeneous_of_degree(&self, degree: u64) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().map(|&x| x as u64).sum::<u64>() == degree)
    }

    /// Numerical evaluation with `ζ = exp(2πi/p)`.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(point)
                    .fold(c.to_complex(), |acc, (&e, z)| acc * z.powu(e))
            })
            .sum()
    }
}

/// `C(n, k)`, saturating.
fn binomial_u128(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `P_{m,p}` as an exact product of `p^m` linear forms.
pub fn build_p(m: u32, p: u32, factor_cap: u64) -> Result<CyclotomicCoefficientPolynomial> {
    let degree = check_cap(m, p, factor_cap, "build_P")?;
    let monomials = binomial_u128(degree + m as u128, m as u128);
    if monomials > MAX_EXPANSION_TERMS as u128 {
        return Err(Error::WorkCapExceeded {
            what: "build_P monomials",
            requested: monomials,
            cap: MAX_EXPANSION_TERMS,
        });
    }
    let (m, p) = (m as usize, p as usize);
    let num_vars = m + 1;

    let mut current: HashMap<Exponents, CyclotomicInteger> = HashMap::new();
    current.insert(vec![0; num_vars], CyclotomicInteger::one(p));

    // t_k ranges over 1..=p; ζ^p = 1 so the exponent is t_k mod p.
    let mut shifts = vec![0usize; m];
    loop {
        let mut next: HashMap<Exponents, CyclotomicInteger> = HashMap::with_capacity(current.len() * 2);
        for (exps, c) in &current {
            for var in 0..num_vars {
                let contribution = match var {
                    0 => c.clone(),
                    k => c.mul_root_power(shifts[k - 1]),
                };
                let mut e = exps.clone();
                e[var] += 1;
                match next.get_mut(&e) {
                    Some(slot) => *slot = slot.add(&contribution)?,
                    None => {
                        next.insert(e, contribution);
                    }
                }
            }
        }
        current = next;

        // Odometer over [0, p)^m.
        let mut k = 0;
        while k < m {
            shifts[k] += 1;
            if shifts[k] < p {
                break;
            }
            shifts[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
    }

    let terms = current.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    Ok(CyclotomicCoefficientPolynomial {
        num_vars,
        order: p,
        terms,
    })
}

/// `Q_{m,p}`: substitutes `x_i = A_i^p` in `P_{m,p}`, checking that every
/// exponent is divisible by `p` and every coefficient is a rational integer.
pub fn build_q(m: u32, p: u32, factor_cap: u64) -> Result<SparseIntegerPolynomial> {
    let pp = build_p(m, p, factor_cap)?;
    let total = (p as u64).pow(m);
    if !pp.is_homogeneous_of_degree(total) {
        return Err(Error::Inconsistent(format!(
            "P_{{{m},{p}}} is not homogeneous of degree {total}"
        )));
    }
    let mut q = SparseIntegerPolynomial::zero(pp.num_vars);
    for (exps, c) in &pp.terms {
        if exps.iter().any(|&e| e % p != 0) {
            return Err(Error::Inconsistent(format!(
                "P_{{{m},{p}}} has exponent {exps:?} not divisible by {p}"
            )));
        }
        let value = c.as_rational_integer().ok_or_else(|| {
            Error::Inconsistent(format!(
                "P_{{{m},{p}}} has non-rational coefficient {c} at {exps:?}"
            ))
        })?;
        q.add_term(exps.iter().map(|&e| e / p).collect(), value)?;
    }
    if !q.is_homogeneous() || q.total_degree().is_some_and(|deg| deg != total / p as u64) {
        return Err(Error::Inconsistent(format!("Q_{{{m},{p}}} has the wrong degree")));
    }
    Ok(q)
}

/// A product of many complex factors kept in log-magnitude form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorProduct {
    /// `ln |∏ f|`; `-inf` when some factor is exactly zero.
    #[serde(with = "crate::serde_float")]
    pub log_magnitude: f64,
    /// Unit complex number carrying the argument of the product.
    pub phase: Complex64,
    /// `ln ∏ (|b_0| + Σ |b_k|)`, the magnitude scale of the factors.
    pub log_scale: f64,
    /// `min |f| / (|b_0| + Σ |b_k|)` over all factors.
    #[serde(with = "crate::serde_float")]
    pub min_relative_factor: f64,
}

impl FactorProduct {
    fn identity() -> Self {
        Self {
            log_magnitude: 0.0,
            phase: Complex64::new(1.0, 0.0),
            log_scale: 0.0,
            min_relative_factor: f64::INFINITY,
        }
    }

    fn push(&mut self, f: Complex64, scale: f64) {
        let mag = f.norm();
        self.log_magnitude += mag.ln();
        if mag > 0.0 {
            self.phase *= f / mag;
        }
        self.log_scale += scale.ln();
        self.min_relative_factor = self
            .min_relative_factor
            .min(if scale > 0.0 { mag / scale } else { 0.0 });
    }

    fn merge(mut self, other: Self) -> Self {
        self.log_magnitude += other.log_magnitude;
        self.phase *= other.phase;
        self.log_scale += other.log_scale;
        self.min_relative_factor = self.min_relative_factor.min(other.min_relative_factor);
        self
    }

    pub fn value(&self) -> Complex64 {
        if self.log_magnitude == f64::NEG_INFINITY {
            return Complex64::zero();
        }
        self.phase * self.log_magnitude.exp()
    }

    /// `|∏ f| / ∏ scale`.
    pub fn relative_magnitude(&self) -> f64 {
        (self.log_magnitude - self.log_scale).exp()
    }
}

/// Product `∏_t (b_0 + Σ_k ζ^{t_k} b_k)` over the given roots `b`.
pub fn factor_product(p: u32, roots: &[Complex64], cap: u64) -> Result<FactorProduct> {
    let m = roots.len().saturating_sub(1) as u32;
    check_cap(m, p, cap, "eval_Q")?;
    let p = p as usize;
    let zeta: Vec<Complex64> = (0..p)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / p as f64))
        .collect();
    let scale: f64 = roots.iter().map(|b| b.norm()).sum();
    let (b0, rest) = roots.split_first().expect("m >= 1");
    let rest_first = rest[0];
    let rest_tail = &rest[1..];

    fn walk(zeta: &[Complex64], tail: &[Complex64], partial: Complex64, scale: f64, acc: &mut FactorProduct) {
        match tail.split_first() {
            None => acc.push(partial, scale),
            Some((b, more)) => {
                for z in zeta {
                    walk(zeta, more, partial + z * b, scale, acc);
                }
            }
        }
    }

    // Blocks by the first index, merged in order for reproducible rounding.
    let blocks: Vec<FactorProduct> = (0..p)
        .into_par_iter()
        .map(|t| {
            let mut acc = FactorProduct::identity();
            walk(&zeta, rest_tail, b0 + zeta[t] * rest_first, scale, &mut acc);
            acc
        })
        .collect();
    Ok(blocks
        .into_iter()
        .fold(FactorProduct::identity(), FactorProduct::merge))
}

fn principal_roots(point: &[Complex64], p: u32) -> Vec<Complex64> {
    point.iter().map(|z| principal_root(*z, p)).collect()
}

/// `Q_{m,p}(point)` through the product formula with principal `p`-th roots.
pub fn eval_q(m: u32, p: u32, point: &[Complex64], cap: u64) -> Result<Complex64> {
    if point.len() != m as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            m + 1
        )));
    }
    Ok(factor_product(p, &principal_roots(point, p), cap)?.value())
}

/// What [`scaled_vanishing`] evaluated and concluded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    /// Order of the evaluated `Q`: `p` for odd `p`, `p / 2` for even `p`.
    pub q_order: u32,
    /// Point `Q` was evaluated at: `(a_i^2)` for odd `p`, `a` for even `p`.
    pub point: Vec<Complex64>,
    pub product: FactorProduct,
    pub tol: f64,
    pub vanishes: bool,
}

/// Decides whether `δ(m, p, a) ≠ 0` through the vanishing of
/// `Q_{m,p}(a_0^2, …, a_m^2)` (odd `p`) or `Q_{m,p/2}(a_0, …, a_m)` (even `p`).
///
/// The product vanishes iff one of its factors does, so the decision is made
/// on the smallest factor relative to its own magnitude scale.
pub fn scaled_vanishing(m: u32, p: u32, a: &ScalingVector, tol: f64, cap: u64) -> Result<bool> {
    Ok(scaled_vanishing_report(m, p, a, tol, cap)?.vanishes)
}

pub fn scaled_vanishing_report(
    m: u32,
    p: u32,
    a: &ScalingVector,
    tol: f64,
    cap: u64,
) -> Result<VanishingReport> {
    if a.len() != m as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "scaling vector has {} entries, expected {}",
            a.len(),
            m + 1
        )));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (q_order, point): (u32, Vec<Complex64>) = if p % 2 == 1 {
        (p, a.entries().iter().map(|z| z * z).collect())
    } else {
        (p / 2, a.entries().to_vec())
    };
    let product = factor_product(q_order, &principal_roots(&point, q_order), cap)?;
    Ok(VanishingReport {
        q_order,
        vanishes: product.min_relative_factor < tol,
        point,
        product,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ci(p: usize, v: &[i64]) -> CyclotomicInteger {
        CyclotomicInteger::from_i64(p, v).unwrap()
    }

    #[test]
    fn small_p_polynomials() {
        let p11 = build_p(1, 1, DEFAULT_FACTOR_CAP).unwrap();
        assert_eq!(p11.len(), 2);
        assert!(p11.coefficient(&[1, 0]).unwrap().ring_eq(&ci(1, &[1])).unwrap());
        assert!(p11.coefficient(&[0, 1]).unwrap().ring_eq(&ci(1, &[1])).unwrap());

        let p12 = build_p(1, 2, DEFAULT_FACTOR_CAP).unwrap();
        assert_eq!(p12.len(), 2);
        assert_eq!(
            p12.coefficient(&[2, 0]).unwrap().as_rational_integer(),
            Some(BigInt::from(1))
        );
        assert_eq!(
            p12.coefficient(&[0, 2]).unwrap().as_rational_integer(),
            Some(BigInt::from(-1))
        );

        let p13 = build_p(1, 3, DEFAULT_FACTOR_CAP).unwrap();
        assert_eq!(p13.len(), 2);
        assert_eq!(
            p13.coefficient(&[3, 0]).unwrap().as_rational_integer(),
            Some(BigInt::from(1))
        );
        assert_eq!(
            p13.coefficient(&[0, 3]).unwrap().as_rational_integer(),
            Some(BigInt::from(1))
        );
    }

    #[test]
    fn small_q_polynomials() {
        assert_eq!(build_q(1, 2, DEFAULT_FACTOR_CAP).unwrap().to_string(), "x0 - x1");
        assert_eq!(build_q(1, 3, DEFAULT_FACTOR_CAP).unwrap().to_string(), "x0 + x1");
        let q = build_q(2, 2, DEFAULT_FACTOR_CAP).unwrap();
        // (A0+A1+A2)(A0-A1+A2)(A0+A1-A2)(A0-A1-A2) in squares
        assert_eq!(q.to_string(), "x0^2 - 2*x0*x1 - 2*x0*x2 + x1^2 - 2*x1*x2 + x2^2");
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_p(2, 100, 4096),
            Err(Error::WorkCapExceeded { .. })
        ));
        assert!(matches!(
            build_p(6, 2, 4096),
            Err(Error::WorkCapExceeded {
                what: "build_P monomials",
                ..
            })
        ));
        assert!(matches!(
            eval_q(3, 1000, &[c(1., 0.); 4], 1000),
            Err(Error::WorkCapExceeded { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let v = eval_q(1, 2, &[c(1., 0.), c(1., 0.)], DEFAULT_EVAL_CAP).unwrap();
        assert!(v.norm() < 1e-12);
        let v = eval_q(1, 3, &[c(1., 0.), c(-1., 0.)], DEFAULT_EVAL_CAP).unwrap();
        assert!(v.norm() < 1e-12);
        let v = eval_q(1, 3, &[c(1., 0.), c(1., 0.)], DEFAULT_EVAL_CAP).unwrap();
        assert!((v - c(2., 0.)).norm() < 1e-12);
    }

    #[test]
    fn vanishing_examples() {
        let a = ScalingVector::new(vec![c(1., 0.), c(0., 1.)]).unwrap();
        assert!(scaled_vanishing(1, 5, &a, 1e-6, DEFAULT_EVAL_CAP).unwrap());
        let ones = ScalingVector::ones(2);
        assert!(scaled_vanishing(1, 4, &ones, 1e-6, DEFAULT_EVAL_CAP).unwrap());
        assert!(!scaled_vanishing(1, 5, &ones, 1e-6, DEFAULT_EVAL_CAP).unwrap());
        let r = scaled_vanishing_report(1, 4, &ones, 1e-6, DEFAULT_EVAL_CAP).unwrap();
        assert_eq!(r.q_order, 2);
    }

    #[test]
    fn json_round_trip() {
        let q = build_q(2, 3, DEFAULT_FACTOR_CAP).unwrap();
        let back = SparseIntegerPolynomial::from_json_terms(3, &q.to_json_terms()).unwrap();
        assert_eq!(q, back);
    }

    #[test]
    fn add_term_validates() {
        let mut q = SparseIntegerPolynomial::zero(2);
        assert!(q.add_term(vec![1], BigInt::from(1)).is_err());
        q.add_term(vec![1, 0], BigInt::from(2)).unwrap();
        q.add_term(vec![1, 0], BigInt::from(-2)).unwrap();
        assert!(q.is_empty());
        assert_eq!(q.to_string(), "0");
    }
}
