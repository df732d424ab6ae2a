//! Real critical points of the distance to a real Fermat cone (odd `d`).
//!
//! [`fewnomial_bound`] is a `d`-independent upper bound on the number of
//! nonzero real critical points. [`conjecture_scan`] collects evidence on the
//! much smaller bound `2n - 1` by counting real endpoints for random real
//! data points. It never claims a proof: trials over the bound are reported
//! as counterexample candidates for closer inspection.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::{self, TrackOptions};
use crate::serde_bigint;

/// `√2^{25n² - 3n + 2} · (n+2)^{5n}`.
pub fn fewnomial_bound(n: u32) -> BigInt {
    let n = n as u64;
    let exponent = 25 * n * n - 3 * n + 2;
    assert!(exponent.is_multiple_of(2), "25n^2 - 3n + 2 is always even");
    (BigInt::from(1) << (exponent / 2) as usize) * BigInt::from(n + 2).pow(5 * n as u32)
}

/// `2^{n+1} · 2^{C(5n, 2)} · (n+2)^{5n}`: the positive-orthant fewnomial
/// bound times the number of orthants.
pub fn fewnomial_bound_by_orthants(n: u32) -> BigInt {
    let n = n as u64;
    let pairs = 5 * n * (5 * n).saturating_sub(1) / 2;
    (BigInt::from(1) << (n + 1 + pairs) as usize) * BigInt::from(n + 2).pow(5 * n as u32)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealOptions {
    pub track: TrackOptions,
    /// An endpoint is real when `max |Im x_i| < imag_tol · max(1, |x|)`.
    pub imag_tol: f64,
    /// Endpoints with imaginary size between `imag_tol` and this are
    /// recorded as borderline.
    pub borderline_tol: f64,
    /// Distance under which `conj(x)` is matched to another endpoint.
    pub pairing_tol: f64,
    /// New data points drawn when a trial is inconclusive.
    pub max_resamples: usize,
}

impl Default for RealOptions {
    fn default() -> Self {
        Self {
            track: TrackOptions::default(),
            imag_tol: 1e-7,
            borderline_tol: 1e-4,
            pairing_tol: 1e-6,
            max_resamples: 3,
        }
    }
}

/// Real-solution count for one data point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealCount {
    pub u: Vec<f64>,
    pub real: usize,
    pub total_finite: usize,
    pub borderline: usize,
    /// Every finite endpoint has its conjugate among the finite endpoints.
    pub conjugation_closed: bool,
}

fn check_odd(d: u32) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "real critical points need an odd degree d >= 3, got {d}"
        )));
    }
    Ok(())
}

fn imag_size(x: &[Complex64]) -> f64 {
    let scale = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    x.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / scale
}

/// Counts the real critical points for real data `u`.
pub fn real_critical_count(n: u32, d: u32, u: &[f64], seed: u64, opts: &RealOptions) -> Result<RealCount> {
    check_odd(d)?;
    if let Some(i) = u.iter().position(|&v| v == 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "data point entry u_{i} must be nonzero and finite"
        )));
    }
    let uc: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let solve = homotopy::solve_critical_points(n, d, &uc, seed, &opts.track)?;
    let sizes: Vec<f64> = solve.finite.iter().map(|x| imag_size(x)).collect();
    let real = sizes.iter().filter(|&&s| s < opts.imag_tol).count();
    let borderline = sizes
        .iter()
        .filter(|&&s| s >= opts.imag_tol && s < opts.borderline_tol)
        .count();
    let conjugation_closed = solve.finite.iter().all(|x| {
        let conj: Vec<Complex64> = x.iter().map(|z| z.conj()).collect();
        let scale = conj.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        solve.finite.iter().any(|y| {
            y.iter()
                .zip(&conj)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                < opts.pairing_tol * scale
        })
    });
    Ok(RealCount {
        u: u.to_vec(),
        real,
        total_finite: solve.finite.len(),
        borderline,
        conjugation_closed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub count: RealCount,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealScanReport {
    pub n: u32,
    pub d: u32,
    pub trials: u64,
    pub seed: u64,
    /// Real-solution count → number of trials.
    pub histogram: BTreeMap<usize, u64>,
    pub max_observed: usize,
    pub conjecture_bound: u64,
    #[serde(with = "serde_bigint")]
    pub fewnomial_bound: BigInt,
    /// Trials with more than `2n - 1` real critical points.
    pub counterexample_candidates: Vec<TrialRecord>,
    /// Trials with an endpoint whose reality could not be decided cleanly.
    pub borderline_trials: Vec<TrialRecord>,
    /// Trials whose real count and total count differ in parity, or whose
    /// endpoints are not closed under conjugation.
    pub parity_violations: Vec<TrialRecord>,
    pub resampled: u64,
    pub options: RealOptions,
}

impl RealScanReport {
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("count,frequency\n");
        for (k, v) in &self.histogram {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

/// Stream for one trial, independent of scheduling.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(n: u32, d: u32, seed: u64, trial: u64, opts: &RealOptions) -> Result<(RealCount, u64)> {
    let mut rng = trial_rng(seed, trial);
    let mut attempt = 0;
    loop {
        let u: Vec<f64> = homotopy::sample_real_u(n as usize + 1, &mut rng)
            .into_iter()
            .map(|z| z.re)
            .collect();
        match real_critical_count(n, d, &u, rng.next_u64(), opts) {
            Err(Error::Inconclusive { .. }) if attempt < opts.max_resamples => attempt += 1,
            other => return other.map(|c| (c, attempt as u64)),
        }
    }
}

/// Histogram of real critical-point counts over seeded random real data.
pub fn conjecture_scan(n: u32, d: u32, trials: u64, seed: u64, opts: &RealOptions) -> Result<RealScanReport> {
    check_odd(d)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let results: Vec<(RealCount, u64)> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(n, d, seed, t, opts))
        .collect::<Result<_>>()?;

    let conjecture_bound = 2 * n as u64 - 1;
    let mut histogram = BTreeMap::new();
    let mut counterexample_candidates = Vec::new();
    let mut borderline_trials = Vec::new();
    let mut parity_violations = Vec::new();
    let mut resampled = 0;
    for (trial, (count, retries)) in results.into_iter().enumerate() {
        resampled += retries;
        *histogram.entry(count.real).or_insert(0) += 1;
        let record = || TrialRecord {
            trial: trial as u64,
            count: count.clone(),
        };
        if count.real as u64 > conjecture_bound {
            counterexample_candidates.push(record());
        }
        if count.borderline > 0 {
            borderline_trials.push(record());
        }
        if (count.real + count.total_finite) % 2 == 1 || !count.conjugation_closed {
            parity_violations.push(record());
        }
    }
    Ok(RealScanReport {
        n,
        d,
        trials,
        seed,
        max_observed: histogram.keys().next_back().copied().unwrap_or(0),
        histogram,
        conjecture_bound,
        fewnomial_bound: fewnomial_bound(n),
        counterexample_candidates,
        borderline_trials,
        parity_violations,
        resampled,
        options: opts.clone(),
    })
}
