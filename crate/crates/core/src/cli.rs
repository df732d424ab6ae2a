//! Command-line front end.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! text meant for stdout and stderr, so the binary is a thin wrapper and the
//! whole interface can be tested in-process.
//!
//! Exit codes: 0 on success, 1 on a usage error (bad flags, invalid
//! arguments), 2 on a computational failure (a work or path cap was hit, the
//! homotopy was inconclusive, or `verify` disagreed with the formula).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ed_formulas::{self, EdBreakdown, FormulaOptions, Variety};
use crate::error::Error;
use crate::expcyclo::{self, JsonTerm, VanishingReport};
use crate::homotopy::{self, TrackOptions, VerificationReport};
use crate::real_experiments::{self, RealOptions, RealScanReport};
use crate::serde_bigint;
use crate::vanishing_sums::{self, ScalingVector};
use crate::DEFAULT_WORK_CAP;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What every `--format json` invocation prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub result: Value,
    pub tolerances_and_seeds: BTreeMap<String, Value>,
    pub version: String,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "fermat-ed",
    version,
    about = "ED-degrees of Fermat hypersurfaces, vanishing sums of roots of unity, and a homotopy cross-check",
    after_help = "Complex numbers are written RE+IMi or RE-IMi (e.g. 2, -1.5+0.5i, 0+1i, 3i), \
                  comma-separated in lists: --a 1+0i,0+1i,2+0i"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format. CSV is available for `eddeg`, `table` and `real-scan`.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every random choice (data points, start system, gamma).
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Overrides the command's main tolerance: the scaled vanishing
    /// threshold, the endpoint residual for `verify`, the imaginary-part
    /// threshold for `real-scan`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cap on enumerated tuples, factors or evaluated terms.
    #[arg(long, global = true)]
    work_cap: Option<u64>,
}

#[derive(Debug, Args)]
struct TrackArgs {
    /// Initial step in the path parameter.
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    #[arg(long)]
    min_step: Option<f64>,
    /// Newton corrector tolerance along the path.
    #[arg(long)]
    corrector_tol: Option<f64>,
    /// Tracking stops at 1 - s = end_gap before the final polish.
    #[arg(long)]
    end_gap: Option<f64>,
    #[arg(long)]
    infinity_radius: Option<f64>,
    #[arg(long)]
    origin_radius: Option<f64>,
    #[arg(long)]
    dedup_tol: Option<f64>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Largest number of paths (the Bézout number) a run may track.
    #[arg(long)]
    path_cap: Option<usize>,
}

impl TrackArgs {
    fn options(&self, residual_tol: Option<f64>) -> TrackOptions {
        let mut o = TrackOptions::default();
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { o.$f = v; })* };
        }
        set!(
            initial_step,
            max_step,
            min_step,
            corrector_tol,
            end_gap,
            infinity_radius,
            origin_radius,
            dedup_tol,
            max_steps,
            path_cap
        );
        if let Some(t) = residual_tol {
            o.residual_tol = t;
        }
        o
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact ED-degree with its full breakdown.
    Eddeg {
        #[command(subcommand)]
        kind: EddegKind,
    },
    /// Vanishing-sum count δ(m, p), or δ(m, p, a) with --a.
    Delta {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: u32,
        /// Scaling vector with m + 1 entries.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
        a: Option<Vec<Complex64>>,
        /// Compare with the closed form (m <= 3 only).
        #[arg(long)]
        closed_form: bool,
    },
    /// Exact integer polynomial Q_{m,p}.
    Qpoly {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: u32,
    },
    /// Evaluate Q_{m,p} at a complex point by its product formula.
    Qeval {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true, required = true)]
        point: Vec<Complex64>,
    },
    /// Decide δ(m, p, a) ≠ 0 through the vanishing of Q.
    ScaledVanishing {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true, required = true)]
        a: Vec<Complex64>,
    },
    /// Count critical points numerically and compare with the formula.
    Verify {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        #[command(flatten)]
        track: TrackArgs,
    },
    /// Histogram of real critical-point counts over random real data.
    RealScan {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[command(flatten)]
        track: TrackArgs,
    },
    /// Upper bounds on critical-point counts.
    Bounds {
        #[arg(short)]
        n: u32,
        /// Also print the degree-dependent counts for this d.
        #[arg(short)]
        d: Option<u32>,
    },
    /// Projective ED-degrees for a range of degrees.
    Table {
        #[arg(short)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        d_min: u32,
        #[arg(long, default_value_t = 12)]
        d_max: u32,
    },
}

#[derive(Debug, Subcommand)]
enum EddegKind {
    /// F_{n,d} = {x_0^d + … + x_n^d = 0} in P^n.
    Projective {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
    },
    /// The affine hypersurface 1 + x_1^d + … + x_n^d = 0.
    Affine {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
    },
    /// Σ x_i^d / a_i = 0 for a scaling vector a with n + 1 entries.
    Scaled {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true, required = true)]
        a: Vec<Complex64>,
    },
}

/// Parses `RE`, `IMi`, `RE+IMi` or `RE-IMi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let bad = || format!("invalid complex number {s:?}; expected RE+IMi");
    let parse = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse(s)?, 0.0));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse(t.strip_prefix('+').unwrap_or(t))?,
    };
    Ok(Complex64::new(re, im))
}

fn format_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        '-'
    } else {
        '+'
    };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn format_complex_list(v: &[Complex64]) -> String {
    v.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",")
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::WorkCapExceeded { .. }
        | Error::PathCapExceeded { .. }
        | Error::Inconclusive { .. }
        | Error::Inconsistent(_) => 2,
        Error::OrderMismatch { .. }
        | Error::UnsupportedDegree(_)
        | Error::ZeroScalingEntry { .. }
        | Error::InvalidArgument(_) => 1,
    }
}

/// Result of `qpoly`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QPolyResult {
    pub m: u32,
    pub p: u32,
    pub num_vars: usize,
    pub total_degree: Option<u64>,
    pub homogeneous: bool,
    pub terms: Vec<JsonTerm>,
    pub display: String,
}

/// Result of `qeval`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QEvalResult {
    pub point: Vec<Complex64>,
    pub value: Complex64,
}

/// Result of `delta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    pub m: u32,
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Complex64>>,
    pub delta: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<u64>,
}

/// Result of `scaled-vanishing`: the criterion together with the count it
/// predicts to be nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledVanishingResult {
    pub report: VanishingReport,
    pub delta_scaled: u64,
    pub consistent: bool,
}

/// Result of `bounds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub n: u32,
    #[serde(with = "serde_bigint")]
    pub fewnomial_bound: BigInt,
    #[serde(with = "serde_bigint")]
    pub fewnomial_bound_by_orthants: BigInt,
    pub conjecture_bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<DegreeBounds>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeBounds {
    pub d: u32,
    #[serde(with = "serde_bigint")]
    pub general_bound: BigInt,
    #[serde(with = "serde_bigint")]
    pub system_degree: BigInt,
    #[serde(with = "serde_bigint")]
    pub origin_multiplicity: BigInt,
}

struct Emit {
    command: String,
    parameters: BTreeMap<String, Value>,
    result: Value,
    tolerances_and_seeds: BTreeMap<String, Value>,
    text: String,
    csv: Option<String>,
    /// Exit code when the computation ran but its conclusion is a failure.
    code: i32,
}

impl Emit {
    fn new<T: Serialize>(command: &str, result: &T, text: String) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            result: serde_json::to_value(result).expect("results serialize"),
            tolerances_and_seeds: BTreeMap::new(),
            text,
            csv: None,
            code: 0,
        }
    }

    fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.parameters
            .insert(key.into(), serde_json::to_value(v).expect("parameters serialize"));
        self
    }

    fn tol(mut self, key: &str, v: impl Serialize) -> Self {
        self.tolerances_and_seeds
            .insert(key.into(), serde_json::to_value(v).expect("tolerances serialize"));
        self
    }

    fn track(mut self, o: &TrackOptions) -> Self {
        if let Value::Object(map) = serde_json::to_value(o).expect("options serialize") {
            for (k, v) in map {
                self.tolerances_and_seeds.insert(format!("track.{k}"), v);
            }
        }
        self
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn render(self, format: Format) -> CliOutput {
        let body = match format {
            Format::Text => self.text,
            Format::Csv => match self.csv {
                Some(c) => c,
                None => {
                    return CliOutput::fail(
                        1,
                        format!("error: CSV output is not available for `{}`\n", self.command),
                    )
                }
            },
            Format::Json => {
                let env = OutputEnvelope {
                    command: self.command,
                    parameters: self.parameters,
                    result: self.result,
                    tolerances_and_seeds: self.tolerances_and_seeds,
                    version: VERSION.into(),
                };
                let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
                s.push('\n');
                s
            }
        };
        CliOutput {
            code: self.code,
            stdout: body,
            stderr: String::new(),
        }
    }
}

fn breakdown_text(b: &EdBreakdown) -> String {
    let mut t = String::new();
    let name = match b.variety {
        Variety::Projective => "projective Fermat hypersurface",
        Variety::Affine => "affine Fermat hypersurface",
        Variety::Scaled => "scaled Fermat hypersurface",
    };
    let _ = writeln!(t, "ED-degree of the {name}, n = {}, d = {}", b.n, b.d);
    let _ = writeln!(t, "  general bound             {}", b.general_bound);
    if let Some(terms) = &b.subset_terms {
        for s in terms {
            let _ = writeln!(
                t,
                "  - delta(|I|-1, {}, a_I), I = {:?}:  {}",
                b.d - 2,
                s.subset,
                s.delta
            );
        }
    } else {
        for term in &b.delta_terms {
            let _ = writeln!(
                t,
                "  - {} x delta({}, {}) = {} x {} = {}",
                term.weight,
                term.m,
                b.d - 2,
                term.weight,
                term.delta,
                term.contribution()
            );
        }
    }
    let _ = writeln!(t, "  epsilon                   {}", b.epsilon);
    if let (Some(sys), Some(orig)) = (&b.system_degree, &b.origin_multiplicity) {
        let _ = writeln!(t, "  system degree             {sys}");
        let _ = writeln!(t, "  origin multiplicity       {orig}");
        let _ = writeln!(t, "  {sys} - {orig} - {} = {}", b.epsilon, b.ed_degree);
    }
    let _ = writeln!(t, "ED-degree: {}", b.ed_degree);
    t
}

fn breakdown_csv(rows: &[EdBreakdown]) -> String {
    let mut s = String::from("n,d,general_bound,epsilon,ed_degree\n");
    for b in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            b.n, b.d, b.general_bound, b.epsilon, b.ed_degree
        );
    }
    s
}

fn scaling(a: Vec<Complex64>) -> crate::Result<ScalingVector> {
    ScalingVector::new(a)
}

fn dispatch(cli: Cli) -> crate::Result<Emit> {
    let g = &cli.global;
    let formula_opts = FormulaOptions {
        work_cap: g.work_cap.unwrap_or(DEFAULT_WORK_CAP),
        ..FormulaOptions::default()
    };
    let cap = g.work_cap.unwrap_or(DEFAULT_WORK_CAP);
    Ok(match cli.command {
        Command::Eddeg { kind } => {
            let (b, name, emit_a) = match kind {
                EddegKind::Projective { n, d } => (
                    ed_formulas::eddeg_projective(n, d, &formula_opts)?,
                    "projective",
                    None,
                ),
                EddegKind::Affine { n, d } => {
                    (ed_formulas::eddeg_affine(n, d, &formula_opts)?, "affine", None)
                }
                EddegKind::Scaled { n, d, a } => {
                    let tol = g.tol.unwrap_or(vanishing_sums::DEFAULT_SCALED_TOL);
                    let sv = scaling(a.clone())?;
                    (
                        ed_formulas::eddeg_scaled(n, d, &sv, tol, &formula_opts)?,
                        "scaled",
                        Some((a, tol)),
                    )
                }
            };
            b.check()?;
            let mut e = Emit::new(&format!("eddeg {name}"), &b, breakdown_text(&b))
                .param("n", b.n)
                .param("d", b.d)
                .tol("work_cap", formula_opts.work_cap)
                .csv(breakdown_csv(std::slice::from_ref(&b)));
            if let Some((a, tol)) = emit_a {
                e = e.param("a", a).tol("tol", tol);
            }
            e
        }
        Command::Delta { m, p, a, closed_form } => {
            let (delta, tol) = match &a {
                Some(a) => {
                    let tol = g.tol.unwrap_or(vanishing_sums::DEFAULT_SCALED_TOL);
                    (
                        vanishing_sums::delta_scaled(m, p, &scaling(a.clone())?, tol, cap)?,
                        Some(tol),
                    )
                }
                None => (vanishing_sums::delta_capped(m, p, cap)?, None),
            };
            let closed = if closed_form {
                Some(vanishing_sums::delta_closed_form(m, p)?)
            } else {
                None
            };
            let r = DeltaResult {
                m,
                p,
                a: a.clone(),
                delta,
                closed_form: closed,
            };
            let mut text = match &a {
                Some(a) => format!("delta({m}, {p}, a = {}) = {delta}\n", format_complex_list(a)),
                None => format!("delta({m}, {p}) = {delta}\n"),
            };
            if let Some(c) = closed {
                let _ = writeln!(
                    text,
                    "closed form: {c} ({})",
                    if c == delta { "agrees" } else { "DISAGREES" }
                );
            }
            let mut e = Emit::new("delta", &r, text)
                .param("m", m)
                .param("p", p)
                .tol("work_cap", cap);
            if let Some(a) = &a {
                e = e.param("a", a);
            }
            if let Some(t) = tol {
                e = e.tol("tol", t);
            }
            if closed.is_some_and(|c| c != delta) {
                e.code = 2;
            }
            e
        }
        Command::Qpoly { m, p } => {
            let cap = g.work_cap.unwrap_or(expcyclo::DEFAULT_FACTOR_CAP);
            let q = expcyclo::build_q(m, p, cap)?;
            let r = QPolyResult {
                m,
                p,
                num_vars: q.num_vars(),
                total_degree: q.total_degree(),
                homogeneous: q.is_homogeneous(),
                terms: q.to_json_terms(),
                display: q.to_string(),
            };
            let text = format!(
                "Q_{{{m},{p}}} in {} variables, {} terms, degree {}:\n{}\n",
                r.num_vars,
                r.terms.len(),
                r.total_degree.map_or("-".into(), |d| d.to_string()),
                r.display
            );
            Emit::new("qpoly", &r, text)
                .param("m", m)
                .param("p", p)
                .tol("work_cap", cap)
        }
        Command::Qeval { m, p, point } => {
            let cap = g.work_cap.unwrap_or(expcyclo::DEFAULT_EVAL_CAP);
            let value = expcyclo::eval_q(m, p, &point, cap)?;
            let text = format!(
                "Q_{{{m},{p}}}({}) = {}\n",
                format_complex_list(&point),
                format_complex(value)
            );
            let r = QEvalResult {
                point: point.clone(),
                value,
            };
            Emit::new("qeval", &r, text)
                .param("m", m)
                .param("p", p)
                .param("point", point)
                .tol("work_cap", cap)
        }
        Command::ScaledVanishing { m, p, a } => {
            let tol = g.tol.unwrap_or(expcyclo::DEFAULT_VANISHING_TOL);
            let eval_cap = g.work_cap.unwrap_or(expcyclo::DEFAULT_EVAL_CAP);
            let sv = scaling(a.clone())?;
            let report = expcyclo::scaled_vanishing_report(m, p, &sv, tol, eval_cap)?;
            let delta_scaled =
                vanishing_sums::delta_scaled(m, p, &sv, vanishing_sums::DEFAULT_SCALED_TOL, cap)?;
            let consistent = report.vanishes == (delta_scaled > 0);
            let text = format!(
                "Q vanishes at a: {}\n  smallest relative factor {:.3e} (tol {tol:e})\n  delta({m}, {p}, a) = {delta_scaled}\n{}\n",
                report.vanishes,
                report.product.min_relative_factor,
                if consistent { "consistent" } else { "INCONSISTENT with the direct count" }
            );
            let r = ScaledVanishingResult {
                report,
                delta_scaled,
                consistent,
            };
            let mut e = Emit::new("scaled-vanishing", &r, text)
                .param("m", m)
                .param("p", p)
                .param("a", a)
                .tol("tol", tol)
                .tol("delta_tol", vanishing_sums::DEFAULT_SCALED_TOL)
                .tol("work_cap", eval_cap);
            if !consistent {
                e.code = 2;
            }
            e
        }
        Command::Verify { n, d, track } => {
            let opts = track.options(g.tol);
            let r: VerificationReport = homotopy::verify_eddeg(n, d, g.seed, &opts)?;
            let c = &r.counts;
            let text = format!(
                "verify n = {n}, d = {d}, seed = {}\n  paths {}: finite {}, origin {}, infinity {}, failed {}\n  distinct finite critical points {}\n  formula {}\n  max residual {:.2e}\nagree: {}\n",
                r.seed, r.total_paths, c.finite, c.origin, c.infinity, c.failed, r.distinct_finite, r.formula_value,
                r.max_critical_residual, r.agree
            );
            let mut e = Emit::new("verify", &r, text)
                .param("n", n)
                .param("d", d)
                .tol("seed", g.seed)
                .track(&opts);
            if !r.agree {
                e.code = 2;
            }
            e
        }
        Command::RealScan { n, d, trials, track } => {
            let mut opts = RealOptions {
                track: track.options(None),
                ..RealOptions::default()
            };
            if let Some(t) = g.tol {
                opts.imag_tol = t;
            }
            let r: RealScanReport = real_experiments::conjecture_scan(n, d, trials, g.seed, &opts)?;
            let mut text = format!(
                "real critical points, n = {n}, d = {d}, {trials} trials, seed {}\n",
                g.seed
            );
            for (k, v) in &r.histogram {
                let _ = writeln!(text, "  {k:>3} real: {v}");
            }
            let _ = writeln!(
                text,
                "max observed {} (conjectured bound {})",
                r.max_observed, r.conjecture_bound
            );
            if !r.counterexample_candidates.is_empty() {
                let _ = writeln!(
                    text,
                    "COUNTEREXAMPLE CANDIDATES: {} trials exceed {}",
                    r.counterexample_candidates.len(),
                    r.conjecture_bound
                );
                for c in &r.counterexample_candidates {
                    let _ = writeln!(
                        text,
                        "  trial {}: {} real, u = {:?}",
                        c.trial, c.count.real, c.count.u
                    );
                }
            }
            if !r.borderline_trials.is_empty() {
                let _ = writeln!(text, "borderline trials: {}", r.borderline_trials.len());
            }
            if !r.parity_violations.is_empty() {
                let _ = writeln!(text, "parity violations: {}", r.parity_violations.len());
            }
            let csv = r.histogram_csv();
            Emit::new("real-scan", &r, text)
                .param("n", n)
                .param("d", d)
                .param("trials", trials)
                .tol("seed", g.seed)
                .tol("imag_tol", opts.imag_tol)
                .tol("borderline_tol", opts.borderline_tol)
                .tol("pairing_tol", opts.pairing_tol)
                .track(&opts.track)
                .csv(csv)
        }
        Command::Bounds { n, d } => {
            if n == 0 {
                return Err(Error::InvalidArgument("n must be at least 1".into()));
            }
            let degree = match d {
                Some(d) if d < 3 => return Err(Error::UnsupportedDegree(d)),
                Some(d) => Some(DegreeBounds {
                    d,
                    general_bound: ed_formulas::generic_bound_projective(n, d),
                    system_degree: ed_formulas::system_degree(n, d),
                    origin_multiplicity: ed_formulas::origin_multiplicity(n, d),
                }),
                None => None,
            };
            let r = BoundsResult {
                n,
                fewnomial_bound: real_experiments::fewnomial_bound(n),
                fewnomial_bound_by_orthants: real_experiments::fewnomial_bound_by_orthants(n),
                conjecture_bound: 2 * n as u64 - 1,
                degree,
            };
            let mut text = format!(
                "n = {n}\n  fewnomial bound on real critical points  {}\n  conjectured bound 2n-1                   {}\n",
                r.fewnomial_bound, r.conjecture_bound
            );
            if let Some(db) = &r.degree {
                let _ = writeln!(text, "d = {}", db.d);
                let _ = writeln!(text, "  generic ED-degree bound  {}", db.general_bound);
                let _ = writeln!(text, "  system degree            {}", db.system_degree);
                let _ = writeln!(text, "  origin multiplicity      {}", db.origin_multiplicity);
            }
            let mut e = Emit::new("bounds", &r, text).param("n", n);
            if let Some(d) = d {
                e = e.param("d", d);
            }
            e
        }
        Command::Table { n, d_min, d_max } => {
            let rows = ed_formulas::eddeg_table(n, d_min, d_max, &formula_opts)?;
            let mut text = format!(
                "{:>4} {:>24} {:>16} {:>24}\n",
                "d", "general bound", "epsilon", "ED-degree"
            );
            for b in &rows {
                let _ = writeln!(
                    text,
                    "{:>4} {:>24} {:>16} {:>24}",
                    b.d, b.general_bound, b.epsilon, b.ed_degree
                );
            }
            let csv = breakdown_csv(&rows);
            Emit::new("table", &rows, text)
                .param("n", n)
                .param("d_min", d_min)
                .param("d_max", d_max)
                .tol("work_cap", formula_opts.work_cap)
                .csv(csv)
        }
    })
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput::fail(1, text)
            } else {
                CliOutput::ok(text)
            };
        }
    };
    let format = cli.global.format;
    match dispatch(cli) {
        Ok(emit) => emit.render(format),
        Err(e) => CliOutput::fail(exit_code(&e), format!("error: {e}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &str) -> CliOutput {
        run(std::iter::once("fermat-ed").chain(args.split_whitespace()))
    }

    #[test]
    fn complex_syntax() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1+0i"), Ok(c(1.0, 0.0)));
        assert_eq!(parse_complex("0+1i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("-1.5-2.5i"), Ok(c(-1.5, -2.5)));
        assert_eq!(parse_complex("2"), Ok(c(2.0, 0.0)));
        assert_eq!(parse_complex("3i"), Ok(c(0.0, 3.0)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3+2E+1i"), Ok(c(1e-3, 20.0)));
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("").is_err());
        for z in [c(1.25, -0.5), c(-3.0, 0.0), c(0.0, 1e-9)] {
            assert_eq!(parse_complex(&format_complex(z)), Ok(z));
        }
    }

    #[test]
    fn headline() {
        let out = cli("eddeg projective -n 2 -d 5");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.trim_end().ends_with("ED-degree: 23"), "{}", out.stdout);
        assert!(out.stdout.contains("general bound"));
        assert!(out.stdout.contains("epsilon"));
    }

    #[test]
    fn delta_value() {
        let out = cli("delta -m 2 -p 6");
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "delta(2, 6) = 8\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(cli("frobnicate").code, 1);
        assert_eq!(cli("eddeg projective -n 2").code, 1);
        assert_eq!(cli("eddeg projective -n 2 -d 2").code, 1);
        assert_eq!(cli("delta -m 6 -p 40 --work-cap 1000").code, 2);
        assert_eq!(cli("verify -n 3 -d 9").code, 2);
        assert_eq!(cli("delta -m 2 -p 6 --format csv").code, 1);
        let help = cli("--help");
        assert_eq!(help.code, 0);
        assert!(help.stdout.contains("eddeg"));
    }

    #[test]
    fn negative_complex_values_parse() {
        let out = cli("scaled-vanishing -m 1 -p 4 --a -1+0i,1+0i");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.starts_with("Q vanishes at a: "));
    }

    #[test]
    fn table_csv() {
        let out = cli("table -n 1 --d-min 3 --d-max 5 --format csv");
        assert_eq!(out.code, 0);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines[0], "n,d,general_bound,epsilon,ed_degree");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,3,"));
    }

    #[test]
    fn json_envelope() {
        let out = cli("eddeg scaled -n 2 -d 4 --a 1+0i,0+1i,2+0i --format json");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let env: OutputEnvelope = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(env.command, "eddeg scaled");
        assert_eq!(env.version, VERSION);
        assert!(env.tolerances_and_seeds.contains_key("tol"));
        assert!(env.tolerances_and_seeds.contains_key("work_cap"));
        let b: EdBreakdown = serde_json::from_value(env.result).unwrap();
        b.check().unwrap();
    }
}
