//! Closed-form ED-degree counts for Fermat hypersurfaces.
//!
//! The projective count splits as
//! `system degree - origin multiplicity - solutions at infinity`, and the
//! solutions at infinity are weighted vanishing-sum counts. [`EdBreakdown`]
//! carries every term so callers can check each identity themselves.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_bigint;
use crate::vanishing_sums::{self, ScalingVector};
use crate::DEFAULT_WORK_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variety {
    Projective,
    Affine,
    Scaled,
}

/// One weighted vanishing-sum term `weight · δ(m, d - 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub m: u32,
    #[serde(with = "serde_bigint")]
    pub weight: BigInt,
    pub delta: u64,
}

impl DeltaTerm {
    pub fn contribution(&self) -> BigInt {
        &self.weight * self.delta
    }
}

/// `δ(|I| - 1, d - 2, a_I)` for one coordinate subset `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetTerm {
    pub subset: Vec<usize>,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdBreakdown {
    pub variety: Variety,
    pub n: u32,
    pub d: u32,
    #[serde(with = "serde_bigint")]
    pub general_bound: BigInt,
    pub delta_terms: Vec<DeltaTerm>,
    /// Per-subset detail, scaled hypersurfaces only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_terms: Option<Vec<SubsetTerm>>,
    #[serde(with = "serde_bigint")]
    pub epsilon: BigInt,
    /// Absent for the affine hypersurface, whose homogenized system does not
    /// pass through the cone point.
    #[serde(with = "serde_bigint::option")]
    pub origin_multiplicity: Option<BigInt>,
    #[serde(with = "serde_bigint::option")]
    pub system_degree: Option<BigInt>,
    #[serde(with = "serde_bigint")]
    pub ed_degree: BigInt,
}

impl EdBreakdown {
    /// Checks the internal identities of the breakdown.
    pub fn check(&self) -> Result<()> {
        let eps: BigInt = self.delta_terms.iter().map(DeltaTerm::contribution).sum();
        if eps != self.epsilon {
            return Err(Error::Inconsistent(format!(
                "delta terms sum to {eps}, epsilon is {}",
                self.epsilon
            )));
        }
        if &self.general_bound - &self.epsilon != self.ed_degree {
            return Err(Error::Inconsistent("general bound - epsilon != ED-degree".into()));
        }
        if let (Some(sys), Some(orig)) = (&self.system_degree, &self.origin_multiplicity) {
            if sys - orig - &self.epsilon != self.ed_degree {
                return Err(Error::Inconsistent(
                    "system degree - mult(0) - epsilon != ED-degree".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaOptions {
    pub work_cap: u64,
    /// Use the piecewise closed forms for `m <= 3` instead of enumerating.
    pub closed_form_fast_path: bool,
}

impl Default for FormulaOptions {
    fn default() -> Self {
        Self {
            work_cap: DEFAULT_WORK_CAP,
            closed_form_fast_path: true,
        }
    }
}

fn geometric_sum(base: &BigInt, terms: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    for _ in 0..terms {
        acc += &pow;
        pow *= base;
    }
    acc
}

fn check_degree(d: u32) -> Result<()> {
    if d < 3 {
        Err(Error::UnsupportedDegree(d))
    } else {
        Ok(())
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `d · Σ_{i=0}^{n-1} (d-1)^i`, the ED-degree of a generic degree-`d`
/// hypersurface in `P^n`.
pub fn generic_bound_projective(n: u32, d: u32) -> BigInt {
    BigInt::from(d) * geometric_sum(&BigInt::from(d as i64 - 1), n)
}

/// `Σ_{i=0}^{n} (d-1)^i`: degree of the curve cut out by the 2x2 minors.
pub fn minor_curve_degree(n: u32, d: u32) -> BigInt {
    geometric_sum(&BigInt::from(d as i64 - 1), n + 1)
}

/// The same degree counted chart by chart on the hyperplane at infinity:
/// `Σ_{i=1}^{n+1} C(n+1, i) (d-2)^{i-1}`.
pub fn minor_curve_degree_by_charts(n: u32, d: u32) -> BigInt {
    let base = BigInt::from(d as i64 - 2);
    (1..=n + 1)
        .map(|i| binomial(BigInt::from(n + 1), BigInt::from(i)) * base.pow(i - 1))
        .sum()
}

/// `d · Σ_{i=0}^{n} (d-1)^i`.
pub fn system_degree(n: u32, d: u32) -> BigInt {
    BigInt::from(d) * minor_curve_degree(n, d)
}

/// `d (d-1)^n`, the multiplicity of the cone point.
pub fn origin_multiplicity(n: u32, d: u32) -> BigInt {
    BigInt::from(d) * BigInt::from(d as i64 - 1).pow(n)
}

fn delta_value(m: u32, p: u32, opts: &FormulaOptions) -> Result<u64> {
    if opts.closed_form_fast_path && m <= 3 {
        vanishing_sums::delta_closed_form(m, p)
    } else {
        vanishing_sums::delta_capped(m, p, opts.work_cap)
    }
}

/// `weight(m) · δ(m, d-2)` for `m = 1..=max_m`, where the weight is
/// `C(coords, m+1)`.
fn delta_terms(coords: u32, max_m: u32, d: u32, opts: &FormulaOptions) -> Result<Vec<DeltaTerm>> {
    (1..=max_m)
        .map(|m| {
            Ok(DeltaTerm {
                m,
                weight: binomial(BigInt::from(coords), BigInt::from(m + 1)),
                delta: delta_value(m, d - 2, opts)?,
            })
        })
        .collect()
}

/// `ε(n, d) = Σ_{m=1}^{n} C(n+1, m+1) δ(m, d-2)`.
pub fn epsilon(n: u32, d: u32, opts: &FormulaOptions) -> Result<BigInt> {
    check_dimension(n)?;
    check_degree(d)?;
    Ok(delta_terms(n + 1, n, d, opts)?
        .iter()
        .map(DeltaTerm::contribution)
        .sum())
}

/// ED-degree of the projective Fermat hypersurface `x_0^d + … + x_n^d = 0`.
pub fn eddeg_projective(n: u32, d: u32, opts: &FormulaOptions) -> Result<EdBreakdown> {
    check_dimension(n)?;
    check_degree(d)?;
    let general_bound = generic_bound_projective(n, d);
    let terms = delta_terms(n + 1, n, d, opts)?;
    let epsilon: BigInt = terms.iter().map(DeltaTerm::contribution).sum();
    let out = EdBreakdown {
        variety: Variety::Projective,
        n,
        d,
        ed_degree: &general_bound - &epsilon,
        general_bound,
        delta_terms: terms,
        subset_terms: None,
        epsilon,
        origin_multiplicity: Some(origin_multiplicity(n, d)),
        system_degree: Some(system_degree(n, d)),
    };
    out.check()?;
    Ok(out)
}

/// ED-degree of the affine Fermat hypersurface `x_1^d + … + x_n^d = 1`.
pub fn eddeg_affine(n: u32, d: u32, opts: &FormulaOptions) -> Result<EdBreakdown> {
    check_dimension(n)?;
    check_degree(d)?;
    let general_bound = generic_bound_projective(n, d);
    let terms = delta_terms(n, n - 1, d, opts)?;
    let epsilon: BigInt = terms.iter().map(DeltaTerm::contribution).sum();
    let out = EdBreakdown {
        variety: Variety::Affine,
        n,
        d,
        ed_degree: &general_bound - &epsilon,
        general_bound,
        delta_terms: terms,
        subset_terms: None,
        epsilon,
        origin_multiplicity: None,
        system_degree: None,
    };
    out.check()?;
    Ok(out)
}

/// ED-degree of the scaled Fermat hypersurface `Σ x_i^d / a_i = 0`.
///
/// Subtracts `δ(|I| - 1, d - 2, a_I)` over coordinate subsets with
/// `|I| >= 2`. `delta_terms` aggregates the subsets by size with weight 1;
/// the per-subset values are in `subset_terms`.
pub fn eddeg_scaled(
    n: u32,
    d: u32,
    a: &ScalingVector,
    tol: f64,
    opts: &FormulaOptions,
) -> Result<EdBreakdown> {
    check_dimension(n)?;
    check_degree(d)?;
    if a.len() != n as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "scaling vector has {} entries, expected {}",
            a.len(),
            n + 1
        )));
    }
    if n >= 30 {
        return Err(Error::InvalidArgument(
            "too many coordinates for subset enumeration".into(),
        ));
    }
    let coords = n as usize + 1;
    let mut subsets: Vec<Vec<usize>> = (0u64..1 << coords)
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| (0..coords).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));

    let subset_terms = subsets
        .into_iter()
        .map(|subset| {
            let a_sub = a.subset(&subset)?;
            let m = subset.len() as u32 - 1;
            let delta = vanishing_sums::delta_scaled(m, d - 2, &a_sub, tol, opts.work_cap)?;
            Ok(SubsetTerm { subset, delta })
        })
        .collect::<Result<Vec<_>>>()?;

    let delta_terms: Vec<DeltaTerm> = (1..=n)
        .map(|m| DeltaTerm {
            m,
            weight: BigInt::one(),
            delta: subset_terms
                .iter()
                .filter(|t| t.subset.len() == m as usize + 1)
                .map(|t| t.delta)
                .sum(),
        })
        .collect();
    let epsilon: BigInt = delta_terms.iter().map(DeltaTerm::contribution).sum();
    let general_bound = generic_bound_projective(n, d);
    let out = EdBreakdown {
        variety: Variety::Scaled,
        n,
        d,
        ed_degree: &general_bound - &epsilon,
        general_bound,
        delta_terms,
        subset_terms: Some(subset_terms),
        epsilon,
        origin_multiplicity: Some(origin_multiplicity(n, d)),
        system_degree: Some(system_degree(n, d)),
    };
    out.check()?;
    Ok(out)
}

/// Projective breakdowns for every `d` in `d_min..=d_max`, ascending.
pub fn eddeg_table(n: u32, d_min: u32, d_max: u32, opts: &FormulaOptions) -> Result<Vec<EdBreakdown>> {
    if d_min > d_max {
        return Ok(Vec::new());
    }
    check_degree(d_min)?;
    (d_min..=d_max)
        .into_par_iter()
        .map(|d| eddeg_projective(n, d, opts))
        .collect()
}
