//! Numerical cross-check by total-degree homotopy continuation.
//!
//! The critical points of the squared distance from `u` to the cone
//! `x_0^d + … + x_n^d = 0` solve the square system
//!
//! ```text
//! x_0^d + … + x_n^d = 0
//! x_0^{d-1} (x_i - u_i) - x_i^{d-1} (x_0 - u_0) = 0,   i = 1..n
//! ```
//!
//! If `x_0 = 0` the minors force every `x_i = 0`, so the nonzero solutions of
//! this anchored system are exactly the critical points. Every path of the
//! total-degree homotopy ends at a critical point, at the cone point, or at
//! infinity; only the first kind is counted.
//!
//! The homotopy is `H(x, s) = (1 - s) γ S(x) + s T(x)`. Paths are tracked in
//! `σ = -ln(1 - s)`, which keeps the step control well scaled as `s → 1`
//! and turns the fractional-power behaviour near singular endpoints into
//! smooth exponential decay or growth.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ed_formulas::{self, FormulaOptions};
use crate::error::{Error, Result};
use crate::serde_bigint;

/// Sparse polynomial with complex coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    num_vars: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl ComplexPolynomial {
    pub fn new(num_vars: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != num_vars) {
            return Err(Error::InvalidArgument(format!(
                "exponent vector {e:?} does not have {num_vars} entries"
            )));
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self { num_vars, terms })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[(Vec<u32>, Complex64)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    fn max_exponent(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, xi)| acc * xi.powu(k)))
            .sum()
    }

    /// Value, gradient, and `Σ |c| |x^e|` (the size of the terms).
    fn eval_full(&self, powers: &Powers) -> (Complex64, Vec<Complex64>, f64) {
        let mut value = Complex64::zero();
        let mut grad = vec![Complex64::zero(); self.num_vars];
        let mut size = 0.0;
        for (e, c) in &self.terms {
            let mono = e
                .iter()
                .enumerate()
                .fold(*c, |acc, (i, &k)| acc * powers.get(i, k));
            value += mono;
            size += mono.norm();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let partial = e.iter().enumerate().fold(*c * k as f64, |acc, (j, &kj)| {
                    acc * powers.get(j, if j == i { kj - 1 } else { kj })
                });
                grad[i] += partial;
            }
        }
        (value, grad, size)
    }
}

/// Table of `x_i^k` for `k <= max`.
struct Powers {
    stride: usize,
    table: Vec<Complex64>,
}

impl Powers {
    fn new(x: &[Complex64], max: u32) -> Self {
        let stride = max as usize + 1;
        let mut table = Vec::with_capacity(x.len() * stride);
        for xi in x {
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..stride {
                table.push(acc);
                acc *= xi;
            }
        }
        Self { stride, table }
    }

    fn get(&self, i: usize, k: u32) -> Complex64 {
        self.table[i * self.stride + k as usize]
    }
}

/// A square system of complex polynomial equations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSystem {
    num_vars: usize,
    equations: Vec<ComplexPolynomial>,
    degrees: Vec<u32>,
}

impl PolynomialSystem {
    pub fn new(equations: Vec<ComplexPolynomial>) -> Result<Self> {
        let num_vars = equations.len();
        if num_vars == 0 {
            return Err(Error::InvalidArgument("empty polynomial system".into()));
        }
        if equations.iter().any(|f| f.num_vars != num_vars) {
            return Err(Error::InvalidArgument("polynomial system is not square".into()));
        }
        let degrees = equations.iter().map(ComplexPolynomial::degree).collect();
        Ok(Self {
            num_vars,
            equations,
            degrees,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equations(&self) -> &[ComplexPolynomial] {
        &self.equations
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn bezout_number(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    fn max_exponent(&self) -> u32 {
        self.equations
            .iter()
            .map(ComplexPolynomial::max_exponent)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.equations.iter().map(|f| f.eval(x)).collect()
    }

    /// Values, Jacobian rows, and per-equation term sizes.
    fn eval_full(&self, x: &[Complex64]) -> (Vec<Complex64>, DMatrix<Complex64>, Vec<f64>) {
        let powers = Powers::new(x, self.max_exponent());
        let n = self.num_vars;
        let mut values = Vec::with_capacity(n);
        let mut sizes = Vec::with_capacity(n);
        let mut jac = DMatrix::zeros(n, n);
        for (row, f) in self.equations.iter().enumerate() {
            let (v, g, s) = f.eval_full(&powers);
            values.push(v);
            sizes.push(s);
            for (col, gi) in g.into_iter().enumerate() {
                jac[(row, col)] = gi;
            }
        }
        (values, jac, sizes)
    }

    /// Largest `|f_i(x)| / Σ_terms |c x^e|`: a backward-error style residual
    /// that is comparable across scales.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        let (values, _, sizes) = self.eval_full(x);
        values
            .iter()
            .zip(&sizes)
            .map(|(v, &s)| if s > 0.0 { v.norm() / s } else { v.norm() })
            .fold(0.0, f64::max)
    }
}

/// Analytic Jacobian `∂f_i / ∂x_j`.
pub fn jacobian(system: &PolynomialSystem, x: &[Complex64]) -> DMatrix<Complex64> {
    system.eval_full(x).1
}

fn check_u(u: &[Complex64]) -> Result<()> {
    match u.iter().position(|ui| ui.norm().is_nan() || ui.norm() == 0.0) {
        Some(index) => Err(Error::InvalidArgument(format!(
            "data point entry u_{index} is zero"
        ))),
        None => Ok(()),
    }
}

fn unit(num_vars: usize, i: usize, k: u32) -> Vec<u32> {
    let mut e = vec![0; num_vars];
    e[i] = k;
    e
}

/// The anchored critical system for the Fermat cone and data point `u`.
pub fn build_critical_system(n: u32, d: u32, u: &[Complex64]) -> Result<PolynomialSystem> {
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    let vars = n as usize + 1;
    if u.len() != vars {
        return Err(Error::InvalidArgument(format!(
            "u has {} entries, expected {vars}",
            u.len()
        )));
    }
    check_u(u)?;
    let one = Complex64::new(1.0, 0.0);
    let fermat = ComplexPolynomial::new(vars, (0..vars).map(|i| (unit(vars, i, d), one)).collect())?;
    let mut equations = vec![fermat];
    for i in 1..vars {
        // x_0^{d-1} x_i - u_i x_0^{d-1} - x_i^{d-1} x_0 + u_0 x_i^{d-1}
        let mut a = unit(vars, 0, d - 1);
        a[i] = 1;
        let mut b = unit(vars, i, d - 1);
        b[0] = 1;
        equations.push(ComplexPolynomial::new(
            vars,
            vec![
                (a, one),
                (unit(vars, 0, d - 1), -u[i]),
                (b, -one),
                (unit(vars, i, d - 1), u[0]),
            ],
        )?);
    }
    PolynomialSystem::new(equations)
}

/// Largest relative residual of the full critical system: the Fermat
/// equation and every 2x2 minor `x_i^{d-1}(x_j - u_j) - x_j^{d-1}(x_i - u_i)`.
pub fn critical_residual(d: u32, u: &[Complex64], x: &[Complex64]) -> f64 {
    let pow = |z: Complex64| z.powu(d - 1);
    let mut worst = {
        let sum: Complex64 = x.iter().map(|xi| xi.powu(d)).sum();
        let size: f64 = x.iter().map(|xi| xi.norm().powi(d as i32)).sum();
        if size > 0.0 {
            sum.norm() / size
        } else {
            sum.norm()
        }
    };
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let l = pow(x[i]) * (x[j] - u[j]);
            let r = pow(x[j]) * (x[i] - u[i]);
            let size = pow(x[i]).norm() * (x[j].norm() + u[j].norm())
                + pow(x[j]).norm() * (x[i].norm() + u[i].norm());
            let res = (l - r).norm();
            worst = worst.max(if size > 0.0 { res / size } else { res });
        }
    }
    worst
}

/// Total-degree start system `x_i^{d_i} - r_i = 0` with its solutions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartSystem {
    pub system: PolynomialSystem,
    pub constants: Vec<Complex64>,
    pub points: Vec<Vec<Complex64>>,
}

/// Builds `x_i^{d_i} = r_i` with seeded unit-modulus `r_i`, and all
/// `∏ d_i` solutions in lexicographic order of the root indices.
pub fn start_system(degrees: &[u32], seed: u64) -> Result<StartSystem> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::InvalidArgument("start degrees must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = degrees.len();
    let constants: Vec<Complex64> = degrees
        .iter()
        .map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU))
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let equations = degrees
        .iter()
        .zip(&constants)
        .enumerate()
        .map(|(i, (&d, &r))| ComplexPolynomial::new(vars, vec![(unit(vars, i, d), one), (vec![0; vars], -r)]))
        .collect::<Result<Vec<_>>>()?;
    let system = PolynomialSystem::new(equations)?;

    let roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .zip(&constants)
        .map(|(&d, r)| {
            (0..d)
                .map(|k| Complex64::from_polar(1.0, (r.arg() + std::f64::consts::TAU * k as f64) / d as f64))
                .collect()
        })
        .collect();
    let mut points = vec![Vec::with_capacity(vars)];
    for choices in &roots {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |z| {
                    let mut p = prefix.clone();
                    p.push(*z);
                    p
                })
            })
            .collect();
    }
    Ok(StartSystem {
        system,
        constants,
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackOptions {
    /// Initial step in `σ = -ln(1 - s)`.
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Relative Newton tolerance for the corrector.
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    /// Tracking stops at `1 - s = end_gap`; a Newton polish on the target
    /// system finishes the path.
    pub end_gap: f64,
    pub infinity_radius: f64,
    pub origin_radius: f64,
    pub residual_tol: f64,
    pub polish_iters: usize,
    pub max_steps: usize,
    /// Relative distance under which two finite endpoints are merged.
    pub dedup_tol: f64,
    pub path_cap: usize,
    /// Fraction of failed paths above which a run is inconclusive.
    pub max_failed_fraction: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            max_step: 0.5,
            min_step: 1e-14,
            corrector_tol: 1e-9,
            max_corrector_iters: 3,
            end_gap: 1e-14,
            infinity_radius: 1e8,
            origin_radius: 1e-6,
            residual_tol: 1e-10,
            polish_iters: 200,
            max_steps: 100_000,
            dedup_tol: 1e-6,
            path_cap: 2000,
            max_failed_fraction: 0.02,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointClass {
    Finite,
    Origin,
    Infinity,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEndpoint {
    pub point: Vec<Complex64>,
    pub classification: EndpointClass,
    pub newton_residual: f64,
    pub steps: usize,
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn solve(jac: DMatrix<Complex64>, rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let sol = jac.lu().solve(&DVector::from_vec(rhs))?;
    sol.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then(|| sol.iter().copied().collect())
}

struct Homotopy<'a> {
    target: &'a PolynomialSystem,
    start: &'a PolynomialSystem,
    gamma: Complex64,
}

impl Homotopy<'_> {
    /// `H`, `∂H/∂x` and `∂H/∂σ` at `σ`, with `1 - s = e^{-σ}`.
    fn eval(&self, x: &[Complex64], sigma: f64) -> (Vec<Complex64>, DMatrix<Complex64>, Vec<Complex64>) {
        let gap = (-sigma).exp();
        let (fs, js, _) = self.start.eval_full(x);
        let (ft, jt, _) = self.target.eval_full(x);
        let g = self.gamma * gap;
        let h = fs.iter().zip(&ft).map(|(a, b)| g * a + b * (1.0 - gap)).collect();
        let jac = js * g + jt * Complex64::new(1.0 - gap, 0.0);
        let dh = fs
            .iter()
            .zip(&ft)
            .map(|(a, b)| -(self.gamma * a - b) * gap)
            .collect();
        (h, jac, dh)
    }

    /// Up to `iters` Newton steps at fixed `σ`.
    fn correct(&self, x: &mut [Complex64], sigma: f64, opts: &TrackOptions) -> bool {
        let mut prev = f64::INFINITY;
        for _ in 0..opts.max_corrector_iters {
            let (h, jac, _) = self.eval(x, sigma);
            let Some(dx) = solve(jac, h) else {
                return false;
            };
            let step = norm(&dx);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi -= di;
            }
            if step > 0.5 * prev {
                return false;
            }
            if step <= opts.corrector_tol * norm(x) {
                return true;
            }
            prev = step;
        }
        false
    }
}

/// Newton on the target alone. Returns the number of iterations used and
/// whether the last step was negligible.
fn polish(target: &PolynomialSystem, x: &mut [Complex64], opts: &TrackOptions) -> (usize, bool) {
    for it in 0..opts.polish_iters {
        if norm(x) < opts.origin_radius || norm(x) > opts.infinity_radius {
            return (it, false);
        }
        let (f, jac, _) = target.eval_full(x);
        let Some(dx) = solve(jac, f) else {
            return (it, false);
        };
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi -= di;
        }
        if norm(&dx) <= 1e-13 * norm(x) {
            return (it + 1, true);
        }
    }
    (opts.polish_iters, false)
}

/// Tracks one path of `(1 - s) γ S + s T` from a start solution at `s = 0`.
pub fn track_path(
    target: &PolynomialSystem,
    start: &PolynomialSystem,
    gamma: Complex64,
    x0: &[Complex64],
    opts: &TrackOptions,
) -> PathEndpoint {
    let hom = Homotopy { target, start, gamma };
    let sigma_end = -opts.end_gap.ln();
    let mut x = x0.to_vec();
    let mut sigma = 0.0;
    let mut h = opts.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    // Norms at accepted nodes, to tell growth from decay.
    let mut history: Vec<(f64, f64)> = vec![(0.0, norm(&x))];

    let finish = |point: Vec<Complex64>, classification, steps| PathEndpoint {
        newton_residual: target.relative_residual(&point),
        point,
        classification,
        steps,
    };

    while sigma < sigma_end {
        if steps >= opts.max_steps {
            let class = if growing(&history, sigma) {
                EndpointClass::Infinity
            } else {
                EndpointClass::Failed
            };
            return finish(x, class, steps);
        }
        steps += 1;
        h = h.min(sigma_end - sigma).min(opts.max_step);

        let (_, jac, dh) = hom.eval(&x, sigma);
        let accepted = solve(jac, dh).and_then(|v| {
            let mut next: Vec<Complex64> = x.iter().zip(&v).map(|(xi, vi)| xi - vi * h).collect();
            hom.correct(&mut next, sigma + h, opts).then_some(next)
        });

        match accepted {
            Some(next) => {
                x = next;
                sigma += h;
                history.push((sigma, norm(&x)));
                streak += 1;
                if streak >= 5 {
                    h *= 2.0;
                    streak = 0;
                }
                if norm(&x) > opts.infinity_radius {
                    return finish(x, EndpointClass::Infinity, steps);
                }
                if norm(&x) < opts.origin_radius {
                    return finish(x, EndpointClass::Origin, steps);
                }
            }
            None => {
                h *= 0.5;
                streak = 0;
                if h < opts.min_step {
                    let class = if growing(&history, sigma) {
                        EndpointClass::Infinity
                    } else {
                        EndpointClass::Failed
                    };
                    return finish(x, class, steps);
                }
            }
        }
    }

    if growing(&history, sigma) && norm(&x) > 1.0 {
        return finish(x, EndpointClass::Infinity, steps);
    }
    let (_, converged) = polish(target, &mut x, opts);
    let size = norm(&x);
    let class = if size < opts.origin_radius {
        EndpointClass::Origin
    } else if size > opts.infinity_radius {
        EndpointClass::Infinity
    } else if converged && target.relative_residual(&x) < opts.residual_tol {
        EndpointClass::Finite
    } else {
        EndpointClass::Failed
    };
    finish(x, class, steps)
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Whether `|x|` grew by more than 10% over the last two units of `σ`.
fn growing(history: &[(f64, f64)], sigma: f64) -> bool {
    let Some(&(_, now)) = history.last() else {
        return false;
    };
    let earlier = history
        .iter()
        .rev()
        .find(|(s, _)| *s <= sigma - 2.0)
        .map(|&(_, n)| n);
    earlier.is_some_and(|e| now > 1.1 * e)
}

/// Outcome of solving one target system by total-degree continuation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub gamma: Complex64,
    pub endpoints: Vec<PathEndpoint>,
    /// Distinct finite endpoints in canonical order.
    pub finite: Vec<Vec<Complex64>>,
}

impl SolveResult {
    pub fn count(&self, class: EndpointClass) -> usize {
        self.endpoints
            .iter()
            .filter(|e| e.classification == class)
            .count()
    }
}

/// Tracks every total-degree path for `target`, seeding `γ` and the start
/// system from `seed`. Paths run in parallel; the result does not depend on
/// scheduling.
pub fn solve_total_degree(target: &PolynomialSystem, seed: u64, opts: &TrackOptions) -> Result<SolveResult> {
    let paths = target.bezout_number();
    if paths > opts.path_cap as u128 {
        return Err(Error::PathCapExceeded {
            paths,
            cap: opts.path_cap,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    let start = start_system(target.degrees(), rng.next_u64())?;
    let endpoints: Vec<PathEndpoint> = start
        .points
        .par_iter()
        .map(|x0| track_path(target, &start.system, gamma, x0, opts))
        .collect();
    let finite = dedup_points(
        endpoints
            .iter()
            .filter(|e| e.classification == EndpointClass::Finite)
            .map(|e| e.point.clone())
            .collect(),
        opts.dedup_tol,
    );
    Ok(SolveResult {
        gamma,
        endpoints,
        finite,
    })
}

fn canonical_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    a.iter()
        .flat_map(|z| [z.re, z.im])
        .zip(b.iter().flat_map(|z| [z.re, z.im]))
        .map(|(x, y)| x.total_cmp(&y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Sorts points canonically and merges those closer than
/// `tol · max(1, |x|)`.
pub fn dedup_points(mut points: Vec<Vec<Complex64>>, tol: f64) -> Vec<Vec<Complex64>> {
    points.sort_by(|a, b| canonical_cmp(a, b));
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for p in points {
        let scale = norm(&p).max(1.0);
        if !kept.iter().any(|q| norm(&sub(&p, q)) < tol * scale) {
            kept.push(p);
        }
    }
    kept
}

/// Complex Gaussian data point, resampling entries with modulus below 0.1.
pub fn sample_complex_u<R: Rng>(vars: usize, rng: &mut R) -> Vec<Complex64> {
    (0..vars)
        .map(|_| loop {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            if z.norm() >= 0.1 {
                break z;
            }
        })
        .collect()
}

/// Real Gaussian data point, resampling entries with modulus below 0.1.
pub fn sample_real_u<R: Rng>(vars: usize, rng: &mut R) -> Vec<Complex64> {
    (0..vars)
        .map(|_| loop {
            let v: f64 = rng.sample(StandardNormal);
            if v.abs() >= 0.1 {
                break Complex64::new(v, 0.0);
            }
        })
        .collect()
}

/// Solves the critical system for a given `u`, refusing runs with too many
/// failed paths.
pub fn solve_critical_points(
    n: u32,
    d: u32,
    u: &[Complex64],
    seed: u64,
    opts: &TrackOptions,
) -> Result<SolveResult> {
    let system = build_critical_system(n, d, u)?;
    let solve = solve_total_degree(&system, seed, opts)?;
    let failed = solve.count(EndpointClass::Failed);
    let total = solve.endpoints.len();
    if failed as f64 > opts.max_failed_fraction * total as f64 {
        return Err(Error::Inconclusive { failed, total });
    }
    Ok(solve)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointCounts {
    pub finite: usize,
    pub origin: usize,
    pub infinity: usize,
    pub failed: usize,
}

impl EndpointCounts {
    pub fn total(&self) -> usize {
        self.finite + self.origin + self.infinity + self.failed
    }

    fn from_endpoints(endpoints: &[PathEndpoint]) -> Self {
        let mut c = Self::default();
        for e in endpoints {
            match e.classification {
                EndpointClass::Finite => c.finite += 1,
                EndpointClass::Origin => c.origin += 1,
                EndpointClass::Infinity => c.infinity += 1,
                EndpointClass::Failed => c.failed += 1,
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: u32,
    pub d: u32,
    pub seed: u64,
    pub u: Vec<Complex64>,
    pub gamma: Complex64,
    pub total_paths: usize,
    pub counts: EndpointCounts,
    pub distinct_finite: usize,
    #[serde(with = "serde_bigint")]
    pub formula_value: BigInt,
    pub agree: bool,
    /// Worst relative residual of the full critical system over the
    /// distinct finite endpoints.
    pub max_critical_residual: f64,
    pub options: TrackOptions,
}

/// Counts critical points numerically for a seeded random `u` and compares
/// the count with the exact ED-degree.
pub fn verify_eddeg(n: u32, d: u32, seed: u64, opts: &TrackOptions) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    let paths = (d as u128).saturating_pow(n + 1);
    if paths > opts.path_cap as u128 {
        return Err(Error::PathCapExceeded {
            paths,
            cap: opts.path_cap,
        });
    }
    let formula_value = ed_formulas::eddeg_projective(n, d, &FormulaOptions::default())?.ed_degree;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = sample_complex_u(n as usize + 1, &mut rng);
    let solve = solve_critical_points(n, d, &u, rng.next_u64(), opts)?;
    let counts = EndpointCounts::from_endpoints(&solve.endpoints);
    let max_critical_residual = solve
        .finite
        .iter()
        .map(|x| critical_residual(d, &u, x))
        .fold(0.0, f64::max);
    let distinct_finite = solve.finite.len();
    Ok(VerificationReport {
        n,
        d,
        seed,
        u,
        gamma: solve.gamma,
        total_paths: solve.endpoints.len(),
        counts,
        distinct_finite,
        agree: BigInt::from(distinct_finite) == formula_value,
        formula_value,
        max_critical_residual,
        options: opts.clone(),
    })
}
